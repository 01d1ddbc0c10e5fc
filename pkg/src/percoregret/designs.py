"""Design ingestion, resiliency rewards, and regret accounting.

A design is a set of notions with pairwise connectivity probabilities.  Its
resiliency reward phi is the Monte Carlo mean spanning-cluster count of the
bond lattice the design induces; regrets compare designs against the best
candidate (empirical) and against the scaling limit l**(2-3y) (theoretical).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .lattice import edge_probabilities, place_notions
from .percolation import estimate_theta, theoretical_k_limit
from .rng import derive_seed


class DesignValidationError(ValueError):
    """Design document violates the schema; message names the field path."""


@dataclass
class Design:
    """A candidate design: notions plus pairwise connectivity lambda."""

    id: str
    notions: list  # ordered notion labels, length l >= 1
    lam: object  # scalar in [0, 1] or symmetric l x l matrix

    @property
    def l(self) -> int:
        return len(self.notions)


@dataclass
class ResiliencyReport:
    """Reward and regret numbers for one evaluated design."""

    design_id: str
    l: int
    phi_hat: float
    phi_stderr: float
    theoretical_limit: float
    theoretical_regret: float
    samples: int
    seed: int
    direction: str
    y: float


@dataclass
class RegretSummary:
    """Empirical regrets over a candidate set (best design has regret 0)."""

    design_ids: list
    empirical_regrets: list
    regret_star: float
    regret_bound: float
    optimal_design_id: str


def _check_lambda(lam, l: int, path: str):
    if isinstance(lam, (int, float)) and not isinstance(lam, bool):
        if not 0.0 <= lam <= 1.0:
            raise DesignValidationError(f"{path}: probability {lam} outside [0, 1]")
        return float(lam)
    if not isinstance(lam, list):
        raise DesignValidationError(f"{path}: expected number or matrix")
    if len(lam) != l:
        raise DesignValidationError(f"{path}: matrix has {len(lam)} rows, expected {l}")
    matrix = np.empty((l, l))
    for i, row in enumerate(lam):
        if not isinstance(row, list) or len(row) != l:
            raise DesignValidationError(f"{path}[{i}]: expected a row of {l} numbers")
        for j, entry in enumerate(row):
            if not isinstance(entry, (int, float)) or isinstance(entry, bool):
                raise DesignValidationError(f"{path}[{i}][{j}]: expected a number")
            if not 0.0 <= entry <= 1.0:
                raise DesignValidationError(
                    f"{path}[{i}][{j}]: probability {entry} outside [0, 1]"
                )
            matrix[i, j] = entry
    for i in range(l):
        for j in range(i + 1, l):
            if matrix[i, j] != matrix[j, i]:
                raise DesignValidationError(
                    f"{path}[{i}][{j}]: matrix is not symmetric "
                    f"({matrix[i, j]} != {matrix[j, i]})"
                )
    return matrix


def parse_design(document, path: str = "design") -> Design:
    """Validate one design document (parsed JSON object or JSON text)."""
    if isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, dict):
        raise DesignValidationError(f"{path}: expected an object")
    for field_name in ("id", "notions", "lambda"):
        if field_name not in document:
            raise DesignValidationError(f"{path}.{field_name}: missing")
    design_id = document["id"]
    if not isinstance(design_id, str) or not design_id:
        raise DesignValidationError(f"{path}.id: expected a non-empty string")
    notions = document["notions"]
    if not isinstance(notions, list) or not notions:
        raise DesignValidationError(f"{path}.notions: expected a non-empty list")
    for i, notion in enumerate(notions):
        if not isinstance(notion, str) or not notion:
            raise DesignValidationError(f"{path}.notions[{i}]: expected a non-empty string")
    if len(set(notions)) != len(notions):
        raise DesignValidationError(f"{path}.notions: labels must be unique")
    lam = _check_lambda(document["lambda"], len(notions), f"{path}.lambda")
    return Design(design_id, list(notions), lam)


def parse_design_set(document) -> list:
    """Validate a design-set document (JSON array of designs)."""
    if isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, list) or not document:
        raise DesignValidationError("design set: expected a non-empty array")
    designs = [parse_design(doc, f"designs[{i}]") for i, doc in enumerate(document)]
    ids = [d.id for d in designs]
    if len(set(ids)) != len(ids):
        raise DesignValidationError("design set: design ids must be unique")
    return designs


def resiliency_reward(
    design: Design,
    n_samples: int,
    seed: int,
    direction: str = "either",
    y: float = 0.5,
    threads: int = 1,
) -> ResiliencyReport:
    """Estimate phi(design) and its regret against the scaling limit."""
    lattice = place_notions(design)
    probs = edge_probabilities(design, lattice)
    est = estimate_theta(lattice, probs, n_samples, seed, direction, threads)
    limit = theoretical_k_limit(design.l, y)
    return ResiliencyReport(
        design_id=design.id,
        l=design.l,
        phi_hat=est.k_hat,
        phi_stderr=est.k_stderr,
        theoretical_limit=limit,
        theoretical_regret=limit - est.k_hat,
        samples=n_samples,
        seed=seed,
        direction=direction,
        y=y,
    )


def evaluate_designs(
    designs: list,
    n_samples: int,
    master_seed: int,
    direction: str = "either",
    y: float = 0.5,
    threads: int = 1,
) -> list:
    """One ResiliencyReport per design, with per-design derived seeds."""
    return [
        resiliency_reward(
            design,
            n_samples,
            derive_seed(master_seed, design.id),
            direction,
            y,
            threads,
        )
        for design in designs
    ]


def empirical_regret(reports: list, chosen: str) -> float:
    """Reward gap between the best candidate and the chosen design."""
    if not reports:
        raise ValueError("need at least one report")
    by_id = {r.design_id: r for r in reports}
    if chosen not in by_id:
        raise KeyError(f"unknown design id {chosen!r}")
    best = max(r.phi_hat for r in reports)
    return best - by_id[chosen].phi_hat


def regret_summary(reports: list) -> RegretSummary:
    """Empirical regrets, their minimum, and the regret bound.

    Ties for the optimal design break toward the lowest input index.
    """
    if not reports:
        raise ValueError("need at least one report")
    best_idx = max(range(len(reports)), key=lambda i: (reports[i].phi_hat, -i))
    best_phi = reports[best_idx].phi_hat
    regrets = [best_phi - r.phi_hat for r in reports]
    regret_star = min(regrets)
    return RegretSummary(
        design_ids=[r.design_id for r in reports],
        empirical_regrets=regrets,
        regret_star=regret_star,
        regret_bound=max(regrets) - regret_star,
        optimal_design_id=reports[best_idx].design_id,
    )


def theoretical_regret(report: ResiliencyReport) -> float:
    """Scaling-limit regret l**(2-3y) - phi_hat; may be negative, unclamped."""
    return report.theoretical_limit - report.phi_hat
