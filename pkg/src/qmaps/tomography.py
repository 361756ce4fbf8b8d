"""Simulated process tomography with correlated system-environment initial states.

Two preparation procedures are modelled:

``ProjectiveFiducial``
    Measure the system onto a rank-1 fiducial, keep that outcome, then rotate.
    Conditioning on a rank-1 outcome factorizes the joint state, so the
    reconstructed map is always completely positive.

``RotationOnly``
    Rotate the system without measuring it first, so the correlations with the
    environment survive.  How a rotated input is embedded in the joint space is
    fixed by an assignment map:

    * ``"affine"``: X -> X (x) tau + Tr(X) chi with tau and chi taken from the
      reference joint state.  The correlation operator is carried along
      unchanged and the reconstruction equals :func:`channels.map_from_joint`.
    * ``"classical"``: X -> sum_mn Pi_m X Pi_n (x) sqrt(tau_m) sqrt(tau_n) for a
      zero-discord reference state sum_j p_j Pi_j (x) tau_j.  This is completely
      positive, and the reconstruction is the Kraus map of
      :func:`channels.map_from_classical`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import channels
from .channels import DynamicalMap, check_unitary, evolve_reduced
from .discord import zero_discord_test
from .qcore import (
    PAULIS,
    DimensionError,
    as_matrix,
    dagger,
    haar_unitary,
    psd_sqrt,
    random_density,
)
from .states import BipartiteState, ProjectorBasis, classically_correlated, example_state, max_example_c23

GRAM_COND_LIMIT = 1e6
NEG_TOL = 1e-10
CP_FLOOR = 1e-13


class Mode(enum.Enum):
    PROJECTIVE_FIDUCIAL = "projective"
    ROTATION_ONLY = "rotation-only"


class RankDeficientInputs(ValueError):
    def __init__(self, cond: float):
        super().__init__(f"input states do not span the operator space (Gram condition number {cond:.3e})")
        self.cond = cond


def _state_prep_unitary(target: np.ndarray) -> np.ndarray:
    """A unitary whose first column is the unit vector ``target``."""
    d = target.shape[0]
    m = np.column_stack([target, np.eye(d, dtype=complex)])
    q, r = np.linalg.qr(m)
    # undo the sign/phase QR puts on the first column
    return q * (r[0, 0] / abs(r[0, 0]))


def default_rotations(d: int) -> list[np.ndarray]:
    """Unitaries taking |0> to an informationally complete set of d^2 pure states.

    Targets are |i>, (|i> + |j>)/sqrt2 and (|i> + i|j>)/sqrt2 for i < j.  For a
    qubit this is 1, X, H and S H, i.e. Bloch vectors +z, -z, +x, +y.
    """
    if d == 2:
        x = PAULIS[0]
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        s = np.diag([1, 1j])
        return [np.eye(2, dtype=complex), x, h, s @ h]
    targets = [np.eye(d, dtype=complex)[:, i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for ph in (1, 1j):
                v = np.zeros(d, dtype=complex)
                v[i], v[j] = 1, ph
                targets.append(v / np.sqrt(2))
    return [_state_prep_unitary(v) for v in targets]


@dataclass(frozen=True)
class PreparationModel:
    """How input states are produced from the (correlated) initial joint state.

    ``fiducial`` is the rank-1 projector measured in ProjectiveFiducial mode.  In
    RotationOnly mode it is the system state that gets rotated; if left as None
    the system marginal of the joint state is rotated instead.
    """

    mode: Mode
    rotations: Sequence[np.ndarray]
    fiducial: np.ndarray | None = None
    assignment: str = "affine"
    d: int = field(init=False)

    def __post_init__(self):
        rots = [check_unitary(r) for r in self.rotations]
        d = rots[0].shape[0]
        if any(r.shape != (d, d) for r in rots):
            raise DimensionError("rotations must share one dimension")
        object.__setattr__(self, "rotations", rots)
        object.__setattr__(self, "d", d)
        if self.fiducial is not None:
            f = as_matrix(self.fiducial)
            if f.shape != (d, d):
                raise DimensionError("fiducial does not match the rotation dimension")
            object.__setattr__(self, "fiducial", f)
        if self.mode is Mode.PROJECTIVE_FIDUCIAL:
            f = self.fiducial
            if f is None:
                raise ValueError("ProjectiveFiducial mode needs a fiducial projector")
            if np.linalg.norm(f @ f - f) > 1e-10 or abs(np.trace(f) - 1) > 1e-10:
                raise ValueError("fiducial must be a rank-1 projector")
        if self.assignment not in ("affine", "classical"):
            raise ValueError(f"unknown assignment {self.assignment!r}")

    @classmethod
    def projective(cls, d: int = 2, fiducial=None, rotations=None) -> "PreparationModel":
        if fiducial is None:
            fiducial = np.zeros((d, d), dtype=complex)
            fiducial[0, 0] = 1
        return cls(Mode.PROJECTIVE_FIDUCIAL, rotations or default_rotations(d), fiducial)

    @classmethod
    def rotation_only(cls, d: int = 2, fiducial=None, rotations=None,
                      assignment: str = "affine") -> "PreparationModel":
        return cls(Mode.ROTATION_ONLY, rotations or default_rotations(d), fiducial, assignment)


@dataclass(frozen=True)
class TomographyRecord:
    inputs: list
    outputs: list

    def __post_init__(self):
        if len(self.inputs) != len(self.outputs):
            raise ValueError("inputs and outputs differ in length")
        for y in self.outputs:
            if abs(np.trace(y) - 1) > 1e-10:
                raise ValueError("output does not have unit trace")


@dataclass(frozen=True)
class ReconstructionResult:
    map: DynamicalMap
    min_eigenvalue: float
    negativity: float
    closest_cp: DynamicalMap
    cp_distance: float
    condition_number: float
    tp_violation: float


def affine_assignment(rho: BipartiteState):
    tau, chi = rho.tau, rho.chi
    return lambda x: np.kron(x, tau) + np.trace(x) * chi


def classical_assignment(p, basis: ProjectorBasis, taus: Sequence):
    """X -> sum_mn Pi_m X Pi_n (x) sqrt(tau_m) sqrt(tau_n); sends sum_j p_j Pi_j to the joint state."""
    classically_correlated(p, basis, taus)
    roots = [psd_sqrt(t) for t in taus]
    proj = basis.projectors

    def assign(x):
        return sum(np.kron(proj[m] @ x @ proj[n], roots[m] @ roots[n])
                   for m in range(len(roots)) for n in range(len(roots)))

    return assign


def classical_parts(rho: BipartiteState, tol: float = 1e-8):
    """Recover (p, basis, taus) from a zero-discord state; raises if rho is discordant."""
    ok, basis = zero_discord_test(rho, tol)
    if not ok:
        raise ValueError("state has nonzero discord; no classical decomposition")
    t = rho.mat.reshape(rho.dim_s, rho.dim_e, rho.dim_s, rho.dim_e)
    blocks = np.einsum("jba,aebf->jef", basis.projectors, t)
    p = np.trace(blocks, axis1=1, axis2=2).real
    taus = []
    for pj, blk in zip(p, blocks):
        taus.append(blk / pj if pj > 1e-14 else np.eye(rho.dim_e) / rho.dim_e)
    p = np.clip(p, 0, None)
    return p / p.sum(), basis, taus


def prepare_inputs(model: PreparationModel, rho_true: BipartiteState):
    """Return (nominal system inputs, conditioned joint operators) for each rotation.

    The nominal input equals the joint operator's system marginal except under
    the classical assignment, whose marginal is partly dephased off the
    projector span; there the nominal state is the one the Kraus map acts on.
    """
    ds, de = rho_true.dim_s, rho_true.dim_e
    if model.d != ds:
        raise DimensionError("preparation model does not match the system dimension")
    inputs, joints = [], []
    if model.mode is Mode.PROJECTIVE_FIDUCIAL:
        lift = np.kron(model.fiducial, np.eye(de))
        cond = lift @ rho_true.mat @ lift
        prob = np.trace(cond).real
        if prob < 1e-12:
            raise ValueError(f"fiducial outcome has probability {prob:.3e}")
        cond = cond / prob
        for r in model.rotations:
            rr = np.kron(r, np.eye(de))
            j = rr @ cond @ dagger(rr)
            joints.append(j)
            inputs.append(np.einsum("aebe->ab", j.reshape(ds, de, ds, de)))
        return inputs, joints

    seed = rho_true.eta if model.fiducial is None else model.fiducial
    if model.assignment == "affine":
        assign = affine_assignment(rho_true)
    else:
        assign = classical_assignment(*classical_parts(rho_true))
    for r in model.rotations:
        x = r @ seed @ dagger(r)
        inputs.append(x)
        joints.append(assign(x))
    return inputs, joints


def run_process(joints: Sequence[np.ndarray], u, dim_s: int, dim_e: int,
                inputs: Sequence[np.ndarray] | None = None) -> TomographyRecord:
    """Evolve each joint operator and read the system output exactly.

    Inputs default to the system marginals of ``joints``; pass the nominal
    inputs from :func:`prepare_inputs` when the assignment is not marginal-consistent.
    """
    u = check_unitary(u, dim_s * dim_e)
    if inputs is None:
        inputs = [np.einsum("aebe->ab", as_matrix(j).reshape(dim_s, dim_e, dim_s, dim_e)) for j in joints]
    outputs = [evolve_reduced(as_matrix(j), u, dim_s, dim_e) for j in joints]
    return TomographyRecord(list(inputs), outputs)


def gram_condition(inputs: Sequence[np.ndarray]) -> float:
    """Condition number of sum_i |x_i>><<x_i| on the d^2-dimensional operator space."""
    xs = np.array([as_matrix(x).reshape(-1) for x in inputs]).T
    return float(np.linalg.cond(xs @ dagger(xs)))


def linear_inversion(record: TomographyRecord) -> DynamicalMap:
    """Unique linear map sending each input to its output (least squares if overcomplete)."""
    xs = np.array([as_matrix(x).reshape(-1) for x in record.inputs]).T
    ys = np.array([as_matrix(y).reshape(-1) for y in record.outputs]).T
    d = int(round(np.sqrt(xs.shape[0])))
    cond = gram_condition(record.inputs)
    if not np.isfinite(cond) or cond >= GRAM_COND_LIMIT:
        raise RankDeficientInputs(cond)
    transfer = ys @ np.linalg.pinv(xs)
    return channels.map_from_transfer(transfer, d)


def negativity(m: DynamicalMap, tol: float = NEG_TOL) -> float:
    """Summed magnitude of Choi eigenvalues below -tol."""
    w = np.linalg.eigvalsh(0.5 * (m.b_matrix + dagger(m.b_matrix)))
    return float(np.abs(w[w < -tol]).sum())


def closest_cp(m: DynamicalMap) -> tuple[DynamicalMap, float]:
    """Drop negative Choi eigenvalues and rescale the trace back to d.

    Returns the projected map and its Frobenius distance from ``m``.  Trace
    preservation is not restored; see ``DynamicalMap.trace_preservation_error``.
    """
    w, v = np.linalg.eigh(0.5 * (m.b_matrix + dagger(m.b_matrix)))
    # rounding noise of an earlier projection must not trigger another one
    if w[0] >= -CP_FLOOR:
        return m, 0.0
    w = np.clip(w, 0, None)
    b = (v * w) @ dagger(v)
    b = 0.5 * (b + dagger(b))
    b *= m.d / np.trace(b).real
    out = DynamicalMap(b, m.d)
    return out, float(np.linalg.norm(out.b_matrix - m.b_matrix))


def reconstruct(record: TomographyRecord) -> ReconstructionResult:
    m = linear_inversion(record)
    lo = channels.min_choi_eigenvalue(m)
    cp, dist = closest_cp(m)
    return ReconstructionResult(m, lo, negativity(m), cp, dist, gram_condition(record.inputs),
                                cp.trace_preservation_error())


def simulate(model: PreparationModel, rho_true: BipartiteState, u) -> ReconstructionResult:
    inputs, joints = prepare_inputs(model, rho_true)
    rec = run_process(joints, u, rho_true.dim_s, rho_true.dim_e, inputs)
    return reconstruct(rec)


def howard_states(p0: float, strength: float, rng: np.random.Generator):
    """Initial joint states sharing the system population p0 on |0>.

    Returns (classical state, its (p, basis, taus), discordant state).  The
    classical state is p0 |0><0| (x) tau' + (1 - p0) |1><1| (x) tau'' with random
    tau', tau''.  The discordant one is 1/4 (1 + a_z sigma_z (x) 1 + c sigma_y (x) sigma_z)
    with a_z = 2 p0 - 1 and c = strength times the largest admissible value.
    """
    if not 0 < p0 <= 1:
        raise ValueError("p0 must lie in (0, 1]")
    if not 0 <= strength <= 1:
        raise ValueError("correlation strength must lie in [0, 1]")
    basis = ProjectorBasis.computational(2)
    p = np.array([p0, 1 - p0])
    taus = [random_density(2, rng), random_density(2, rng)]
    classical = classically_correlated(p, basis, taus)
    a = np.array([0.0, 0.0, 2 * p0 - 1])
    discordant = example_state(a, strength * max_example_c23(a))
    return classical, (p, basis, taus), discordant


def howard_scenario(p0: float, strength: float, u=None, seed: int = 0,
                    mode: Mode = Mode.ROTATION_ONLY) -> tuple[ReconstructionResult, ReconstructionResult]:
    """Tomography of one process from two initial states with the same population p0.

    (a) the classically correlated state, whose map is built through the
    classical assignment; (b) a discordant state with the same system population,
    prepared with the affine assignment.  ``u`` defaults to the Heisenberg example
    unitary at 2 omega t = 0.1.
    """
    rng = np.random.default_rng([seed, 0x48])
    u = channels.example_unitary(0.05) if u is None else check_unitary(u, 4)
    classical, parts, discordant = howard_states(p0, strength, rng)
    fid = np.diag([1.0, 0.0]).astype(complex)
    if mode is Mode.PROJECTIVE_FIDUCIAL:
        model = PreparationModel.projective(2, fid)
        return simulate(model, classical, u), simulate(model, discordant, u)
    rots = default_rotations(2)
    # the classical branch uses its known decomposition rather than re-deriving one
    assign = classical_assignment(*parts)
    nominal = [r @ fid @ dagger(r) for r in rots]
    res_a = reconstruct(run_process([assign(x) for x in nominal], u, 2, 2, nominal))
    res_b = simulate(PreparationModel.rotation_only(2, fid, rots, "affine"), discordant, u)
    return res_a, res_b


def random_tomography_pair(rng: np.random.Generator, dim_s: int = 2, dim_e: int = 2):
    """Random (rho_true, U): full-rank joint state and Haar unitary."""
    rho = BipartiteState(random_density(dim_s * dim_e, rng), dim_s, dim_e)
    return rho, haar_unitary(dim_s * dim_e, rng)
