"""Orbit search worker - stochastic maximization of entanglement over an SU(N+1) orbit."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from codetiming import Timer

from sas_entanglement.config import OrbitSearchConfig, get_logger, get_settings
from sas_entanglement.entanglement_measures import lambda_min_batch, signed_concurrence_batch
from sas_entanglement.exceptions import OrbitSearchError
from sas_entanglement.linalg import haar_random_unitaries, make_rng, spawn_rngs, su_generators
from sas_entanglement.models.domain import (
    ComplexArray,
    FloatArray,
    OrbitSearchResult,
    SymmetricDensityMatrix,
    UnitaryMatrix,
)
from sas_entanglement.symmetric_space import embed_array

logger = get_logger(__name__)

Objective = Literal["negativity", "concurrence"]

SAMPLE_CHUNK = 4096

# Scores at or below this are partial-transpose kernel rounding, reported as 0
ROUNDING_FLOOR = 1e-14


@dataclass(frozen=True)
class OrbitObjective:
    """Entanglement of U rho U^H as a function of a stack of unitaries.

    ``score`` is the unclipped quantity (-2 lambda_min, or mu_1 - mu_2 - mu_3 - mu_4)
    so the ascent still has a slope inside the separable region; the reported
    value is ``max(0, score)``.
    """
    rho: SymmetricDensityMatrix
    kind: Objective
    sqrt_rho: ComplexArray | None = None

    @classmethod
    def build(cls, rho: SymmetricDensityMatrix, kind: Objective) -> "OrbitObjective":
        if kind == "negativity":
            return cls(rho=rho, kind=kind)
        if kind == "concurrence":
            if rho.n_qubits != 2:
                raise OrbitSearchError(f"Concurrence objective needs a two-qubit state, got {rho.n_qubits} qubits")
            eigenvalues, vectors = np.linalg.eigh(rho.entries)
            sqrt_rho = (vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ vectors.conj().T
            return cls(rho=rho, kind=kind, sqrt_rho=sqrt_rho)
        raise OrbitSearchError(f"Unknown objective: {kind!r}")

    def score(self, unitaries: ComplexArray) -> FloatArray:
        """Signed objective for a stack (k, d, d) of unitaries."""
        u_dag = np.swapaxes(unitaries.conj(), -1, -2)
        n_qubits = self.rho.n_qubits
        if self.kind == "negativity":
            return -2.0 * lambda_min_batch(embed_array(unitaries @ self.rho.entries @ u_dag, n_qubits))
        assert self.sqrt_rho is not None
        return signed_concurrence_batch(embed_array(unitaries @ self.sqrt_rho @ u_dag, n_qubits))


def _reported(score: float) -> float:
    return score if score > ROUNDING_FLOOR else 0.0


def _project_to_su(u: ComplexArray) -> ComplexArray:
    """Nearest unitary (polar factor) rescaled to determinant 1."""
    w, _, vh = np.linalg.svd(u)
    unitary = w @ vh
    return unitary / np.linalg.det(unitary) ** (1.0 / unitary.shape[0])


def orbit_objective(rho: SymmetricDensityMatrix, unitary: UnitaryMatrix, objective: Objective) -> float:
    """Objective value of U rho U^H for one unitary."""
    score = OrbitObjective.build(rho, objective).score(unitary.entries[np.newaxis])
    return _reported(float(score[0]))


def orbit_sample_max(rho: SymmetricDensityMatrix, objective: Objective, n: int, rng: np.random.Generator) -> float:
    """Largest objective over ``n`` Haar samples of the orbit."""
    if n < 1:
        raise OrbitSearchError(f"Need at least one orbit sample, got {n}")
    target = OrbitObjective.build(rho, objective)
    dim = rho.n_qubits + 1
    best = -np.inf
    remaining = n
    while remaining > 0:
        count = min(remaining, SAMPLE_CHUNK)
        best = max(best, float(np.max(target.score(haar_random_unitaries(dim, count, rng)))))
        remaining -= count
    return _reported(best)


class OrbitSearcher:
    """Haar sampling followed by adaptive random-direction ascent on SU(d)."""

    def __init__(self, config: OrbitSearchConfig | None = None):
        self.config = config or get_settings().orbit_search

    @Timer(name="orbit_maximize", text="Orbit search: {:.3f}s", logger=logger.debug)
    def maximize(self, rho: SymmetricDensityMatrix, objective: Objective, stop_at: float | None = None) -> OrbitSearchResult:
        """Best orbit point found; its value is a lower bound on the orbit maximum.

        The sampling phase scores the same unitaries as
        ``orbit_sample_max(rho, objective, n_haar_samples, make_rng(seed))``, so the
        result is never below that sample maximum. With ``stop_at`` set, restarts
        end as soon as the best reported value reaches it.
        """
        cfg = self.config
        target = OrbitObjective.build(rho, objective)
        dim = rho.n_qubits + 1
        logger.debug(
            "Starting orbit search",
            extra={"objective": objective, "n_qubits": rho.n_qubits, "seed": cfg.seed},
        )

        # Step 1: identity plus Haar samples, drawn from the master stream
        start_u, start_score, evaluations = self._sample_phase(target, dim, make_rng(cfg.seed))

        # Step 2: ascent restarts, each on its own child stream
        best_u, best_score, best_converged = start_u, start_score, False
        for index, restart_rng in enumerate(spawn_rngs(cfg.seed, cfg.n_ascent_restarts)):
            initial = start_u if index == 0 else haar_random_unitaries(dim, 1, restart_rng)[0]
            u, score, used, converged = self._ascend(target, initial, restart_rng)
            evaluations += used
            if score > best_score:
                best_u, best_score, best_converged = u, score, converged
            logger.debug(f"Restart {index}: score={score:.12f} converged={converged} evaluations={used}")
            if stop_at is not None and _reported(best_score) >= stop_at:
                logger.debug(f"Reached target {stop_at:.12f} after {index + 1} restarts")
                break

        unitary = UnitaryMatrix(_project_to_su(best_u))
        final_score = float(target.score(unitary.entries[np.newaxis])[0])
        logger.info(
            "Orbit search finished",
            extra={"objective": objective, "best_score": final_score, "evaluations": evaluations},
        )
        return OrbitSearchResult(
            best_value=_reported(final_score),
            best_unitary=unitary,
            n_evaluations=evaluations,
            converged=best_converged,
            best_score=final_score,
        )

    def _sample_phase(self, target: OrbitObjective, dim: int, rng: np.random.Generator) -> tuple[ComplexArray, float, int]:
        best_u = np.eye(dim, dtype=np.complex128)
        best_score = float(target.score(best_u[np.newaxis])[0])
        evaluations = 1
        remaining = self.config.n_haar_samples
        while remaining > 0:
            count = min(remaining, SAMPLE_CHUNK)
            samples = haar_random_unitaries(dim, count, rng)
            scores = target.score(samples)
            top = int(np.argmax(scores))
            if scores[top] > best_score:
                best_u, best_score = samples[top], float(scores[top])
            evaluations += count
            remaining -= count
        return best_u, best_score, evaluations

    def _ascend(
        self,
        target: OrbitObjective,
        start: ComplexArray,
        rng: np.random.Generator,
    ) -> tuple[ComplexArray, float, int, bool]:
        """Mirrored random-direction ascent U <- exp(+-i eps H) U with step adaptation."""
        cfg = self.config
        generators = su_generators(start.shape[0])
        u = start
        score = float(target.score(u[np.newaxis])[0])
        evaluations = 1
        step = cfg.ascent_step_init

        for _ in range(cfg.max_ascent_iters):
            if step < cfg.ascent_tolerance:
                return u, score, evaluations, True
            weights = rng.standard_normal(generators.shape[0])
            h = np.tensordot(weights, generators, axes=1)
            h /= np.linalg.norm(h)
            eigenvalues, vectors = np.linalg.eigh(h)
            forward = (vectors * np.exp(1j * step * eigenvalues)) @ vectors.conj().T
            candidates = np.stack([forward @ u, forward.conj().T @ u])
            scores = target.score(candidates)
            evaluations += 2
            best = int(np.argmax(scores))
            if scores[best] > score:
                u, score = candidates[best], float(scores[best])
                step *= cfg.step_grow
            else:
                step *= cfg.step_shrink

        return u, score, evaluations, step < cfg.ascent_tolerance

    def is_orbit_separable(
        self,
        rho: SymmetricDensityMatrix,
        n_samples: int,
        rng: np.random.Generator,
        threshold: float,
        batch_size: int = 250,
    ) -> bool:
        """True when neither rho itself nor any of ``n_samples`` Haar orbit points has negativity above ``threshold``."""
        target = OrbitObjective.build(rho, "negativity")
        dim = rho.n_qubits + 1
        if float(target.score(np.eye(dim, dtype=np.complex128)[np.newaxis])[0]) > threshold:
            return False
        remaining = n_samples
        while remaining > 0:
            count = min(remaining, batch_size)
            if float(np.max(target.score(haar_random_unitaries(dim, count, rng)))) > threshold:
                return False
            remaining -= count
        return True


def orbit_maximize(
    rho: SymmetricDensityMatrix,
    objective: Objective,
    cfg: OrbitSearchConfig | None = None,
    stop_at: float | None = None,
) -> OrbitSearchResult:
    """Maximize ``objective`` over the SU(N+1) orbit of ``rho``."""
    return OrbitSearcher(cfg).maximize(rho, objective, stop_at)
