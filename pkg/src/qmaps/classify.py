"""State taxonomy by correlation type, and randomized checks linking correlations to complete positivity."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import channels
from .discord import OptimizerConfig, conditional_entropy, discord, mutual_information, zero_discord_test
from .qcore import haar_unitary, random_density, random_simplex, vn_entropy
from .states import (
    PPT_DECISIVE_DIM,
    BipartiteState,
    classically_correlated,
    example_state,
    max_example_c23,
    ppt_min_eigenvalue,
    product_state,
    random_classical_parts,
    random_state,
)

log = logging.getLogger(__name__)

CLASS_TOL = 1e-8
THEOREM_TOL = 1e-10
NCP_THRESHOLD = 1e-6
DISCORD_THRESHOLD = 1e-6


class Label(enum.Enum):
    SIMPLY_SEPARABLE = "SimplySeparable"
    CLASSICALLY_CORRELATED = "ClassicallyCorrelated"
    QUANTUM_CORRELATED_SEPARABLE = "QuantumCorrelatedSeparable"
    ENTANGLED = "Entangled"
    PPT_UNDECIDED = "PptUndecided"


@dataclass(frozen=True)
class StateClass:
    label: Label
    product_distance: float
    discord: float
    min_pt_eigenvalue: float


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    trial: int
    dim_s: int
    dim_e: int
    state_class: StateClass
    min_choi_eigenvalue: float
    discord: float
    completeness_error: float
    output_error: float = 0.0

    CSV_HEADER = ("seed", "trial", "dim_s", "dim_e", "class", "min_choi_eig", "discord", "completeness_err")

    def csv_row(self) -> tuple:
        return (self.seed, self.trial, self.dim_s, self.dim_e, self.state_class.label.value,
                self.min_choi_eigenvalue, self.discord, self.completeness_error)


class TheoremViolation(RuntimeError):
    """A classically correlated trial produced a map that is not completely positive."""

    def __init__(self, seed: int, trial: int, detail: str):
        super().__init__(f"seed={seed} trial={trial}: {detail}")
        self.seed = seed
        self.trial = trial


class ContrapositiveViolation(RuntimeError):
    """A not-CP map came from a state whose variational discord is below threshold."""

    def __init__(self, seed: int, trial: int, detail: str):
        super().__init__(f"seed={seed} trial={trial}: {detail}")
        self.seed = seed
        self.trial = trial


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def classify_state(rho: BipartiteState, tol: float = CLASS_TOL,
                   opt: OptimizerConfig | None = None) -> StateClass:
    """Place rho in the correlation taxonomy.

    Cascade: product -> zero discord -> negative partial transpose -> PPT in
    a dimension where PPT is decisive -> undecided.  For zero-discord states the
    reported discord is the gap at the witness basis instead of a full optimization.
    """
    dist = float(np.linalg.norm(rho.mat - np.kron(rho.eta, rho.tau)))
    pt = ppt_min_eigenvalue(rho)
    if dist < tol:
        return StateClass(Label.SIMPLY_SEPARABLE, dist, 0.0, pt)
    zero, witness = zero_discord_test(rho, tol, opt)
    if zero:
        gap = mutual_information(rho) - vn_entropy(rho.tau) + conditional_entropy(rho, witness)
        return StateClass(Label.CLASSICALLY_CORRELATED, dist, max(gap, 0.0), pt)
    dval = discord(rho, opt).discord
    if pt < -tol:
        label = Label.ENTANGLED
    elif rho.dim <= PPT_DECISIVE_DIM:
        label = Label.QUANTUM_CORRELATED_SEPARABLE
    else:
        label = Label.PPT_UNDECIDED
    return StateClass(label, dist, dval, pt)


def _theorem_trial(seed: int, trial: int, ds: int, de: int, extra_points: int) -> TrialRecord:
    rng = trial_rng(seed, trial)
    p, basis, taus = random_classical_parts(ds, de, rng)
    u = haar_unitary(ds * de, rng)
    rho = classically_correlated(p, basis, taus)
    kraus = channels.map_from_classical(p, basis, taus, u)
    bmap = channels.kraus_to_map(kraus)
    lo = channels.min_choi_eigenvalue(bmap)

    out_err = 0.0
    for q in [p] + [random_simplex(ds, rng) for _ in range(extra_points)]:
        r = classically_correlated(q, basis, taus)
        direct = channels.evolve_reduced(r.mat, u, ds, de)
        out_err = max(out_err, float(np.linalg.norm(kraus.apply(r.eta) - direct)))

    cls = classify_state(rho)
    rec = TrialRecord(seed, trial, ds, de, cls, lo, cls.discord, kraus.completeness_error, out_err)
    if lo <= -THEOREM_TOL:
        raise TheoremViolation(seed, trial, f"min Choi eigenvalue {lo:.3e}")
    if kraus.completeness_error >= THEOREM_TOL:
        raise TheoremViolation(seed, trial, f"Kraus completeness error {kraus.completeness_error:.3e}")
    if out_err >= THEOREM_TOL:
        raise TheoremViolation(seed, trial, f"output mismatch {out_err:.3e}")
    return rec


def theorem_harness(n_trials: int, dims: Sequence[tuple[int, int]] = ((2, 2),), seed: int = 0,
                    extra_points: int = 5) -> list[TrialRecord]:
    """Random classically correlated states under random unitaries; every map must be CP.

    Trial i uses dims[i % len(dims)] and the RNG stream (seed, i).  Raises
    TheoremViolation on the first offending trial.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    dims = list(dims)
    records = []
    for i in range(n_trials):
        ds, de = dims[i % len(dims)]
        records.append(_theorem_trial(seed, i, ds, de, extra_points))
    log.info("theorem harness: %d trials, worst min eigenvalue %.3e", n_trials,
             min(r.min_choi_eigenvalue for r in records))
    return records


SAMPLERS = ("example-family", "random-correlated", "simply-separable")


def _sample_example_family(rng: np.random.Generator):
    while True:
        a = rng.uniform(-1, 1, size=3)
        if a @ a <= 1:
            break
    c23 = rng.uniform(0, 1) * max_example_c23(a)
    rho = example_state(a, c23)
    u = channels.example_unitary(rng.uniform(0, np.pi / 2))
    return rho, u


def _sample_random_correlated(rng: np.random.Generator, ds: int, de: int):
    rank = int(rng.integers(1, ds * de + 1))
    rho = random_state(ds, de, rng, rank=rank)
    return rho, haar_unitary(ds * de, rng)


def _sample_product(rng: np.random.Generator, ds: int, de: int):
    rho = product_state(random_density(ds, rng), random_density(de, rng))
    return rho, haar_unitary(ds * de, rng)


def ncp_search(n_trials: int, sampler: str = "random-correlated", seed: int = 0,
               dims: Iterable[tuple[int, int]] = ((2, 2), (2, 3)),
               opt: OptimizerConfig | None = None) -> list[TrialRecord]:
    """Sample correlated states and unitaries, build the induced map and record CP-ness and discord.

    Every record with min Choi eigenvalue below -1e-6 must have discord above
    1e-6; otherwise ContrapositiveViolation is raised.  The example-family sampler
    is always two-qubit.
    """
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}; choose from {SAMPLERS}")
    dims = list(dims)
    opt = opt or OptimizerConfig(seed=seed)
    records = []
    for i in range(n_trials):
        rng = trial_rng(seed, i)
        if sampler == "example-family":
            rho, u = _sample_example_family(rng)
        else:
            ds, de = dims[i % len(dims)]
            fn = _sample_random_correlated if sampler == "random-correlated" else _sample_product
            rho, u = fn(rng, ds, de)
        m = channels.map_from_joint(rho, u)
        lo = channels.min_choi_eigenvalue(m)
        dval = discord(rho, opt).discord
        dist = float(np.linalg.norm(rho.mat - np.kron(rho.eta, rho.tau)))
        pt = ppt_min_eigenvalue(rho)
        if dist < CLASS_TOL:
            label = Label.SIMPLY_SEPARABLE
        elif dval < DISCORD_THRESHOLD:
            label = Label.CLASSICALLY_CORRELATED
        elif pt < -CLASS_TOL:
            label = Label.ENTANGLED
        elif rho.dim <= PPT_DECISIVE_DIM:
            label = Label.QUANTUM_CORRELATED_SEPARABLE
        else:
            label = Label.PPT_UNDECIDED
        rec = TrialRecord(seed, i, rho.dim_s, rho.dim_e, StateClass(label, dist, dval, pt), lo, dval, 0.0)
        records.append(rec)
        if lo < -NCP_THRESHOLD and dval <= DISCORD_THRESHOLD:
            raise ContrapositiveViolation(seed, i, f"min Choi eigenvalue {lo:.3e} with discord {dval:.3e}")
    ncp = sum(r.min_choi_eigenvalue < -NCP_THRESHOLD for r in records)
    log.info("ncp search (%s): %d/%d maps not CP", sampler, ncp, n_trials)
    return records


def ncp_fraction(records: Sequence[TrialRecord]) -> float:
    return sum(r.min_choi_eigenvalue < -NCP_THRESHOLD for r in records) / max(len(records), 1)
