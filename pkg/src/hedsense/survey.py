"""Parameter-space classification, power-law fits and end-to-end scenarios."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from . import fisher as fi
from .laurent import LaurentExpansion, PoleOrderError, expand_generator
from .model import (SystemParams, build_couplings, build_generator, build_perturbation,
                    generator_matrix)

log = logging.getLogger(__name__)

HED = "hed_line"
SINGULAR = "singular_surface_non_hed"
EXCEPTIONAL = "exceptional_plane"
DIABOLIC = "diabolic_plane"
REGULAR = "regular"
KINDS = (HED, SINGULAR, EXCEPTIONAL, DIABOLIC, REGULAR)

DEFAULT_CLASS_TOL = 1e-9
DEFAULT_FIT_RANGE = (1e-3, 1e-2)
CLEAN_R2 = 0.99


@dataclass(frozen=True)
class SingularityClass:
    """Class label plus the three distances it was decided from.

    Distances are ``|J^2 - (g^2 - gamma^2)|``, ``|g - gamma|`` and ``|J|``.
    """

    kind: str
    surface_distance: float
    exceptional_distance: float
    diabolic_distance: float
    tol: float
    on_surface: bool
    on_exceptional: bool
    on_diabolic: bool

    @property
    def singular(self) -> bool:
        return self.kind in (HED, SINGULAR)


def classify(g: float, gamma: float, J: float, tol: float = DEFAULT_CLASS_TOL) -> SingularityClass:
    """Assign a balanced-rate point to exactly one singularity class.

    Precedence: HED line, exceptional plane, diabolic plane, singular surface,
    regular. On the HED line all three defining conditions hold at once.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    d_surf = abs(J * J - (g * g - gamma * gamma))
    d_ep = abs(g - gamma)
    d_dp = abs(J)
    ep = d_ep <= tol
    dp = d_dp <= tol
    surf = d_surf <= tol * max(1.0, g * g)
    if ep and dp:
        kind = HED
    elif ep:
        kind = EXCEPTIONAL
    elif dp:
        kind = DIABOLIC
    elif surf:
        kind = SINGULAR
    else:
        kind = REGULAR
    return SingularityClass(kind, d_surf, d_ep, d_dp, tol, surf, ep, dp)


def eigen_structure(H, cluster_tol: float | None = None, null_tol: float | None = None):
    """Group eigenvalues and report ``(mu, algebraic, geometric)`` multiplicities.

    Geometric multiplicity is the nullity of ``H - mu I``, read off its
    singular values with threshold ``1e-7 * ||H||``. Near an exceptional
    point the eigenvalues split like ``sqrt(eps)``, hence the loose clustering.
    """
    H = np.asarray(H, dtype=complex)
    scale = max(np.linalg.norm(H, 2), 1.0)
    if cluster_tol is None:
        cluster_tol = 1e-6 * scale
    if null_tol is None:
        null_tol = 1e-7 * scale
    groups: list[list[complex]] = []
    for mu in np.linalg.eigvals(H):
        for grp in groups:
            if abs(np.mean(grp) - mu) <= cluster_tol:
                grp.append(mu)
                break
        else:
            groups.append([mu])
    out = []
    eye = np.eye(H.shape[0])
    for grp in groups:
        mu = complex(np.mean(grp))
        sv = np.linalg.svd(H - mu * eye, compute_uv=False)
        out.append((mu, len(grp), int(np.count_nonzero(sv <= null_tol))))
    out.sort(key=lambda r: (round(r[0].real, 9), round(r[0].imag, 9)))
    return out


def is_defective(H) -> bool:
    return any(geo < alg for _, alg, geo in eigen_structure(H))


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float
    theta_range: tuple
    n_points: int

    @property
    def clean(self) -> bool:
        return self.r_squared >= CLEAN_R2


def fit_power_law(theta, values, theta_range=None) -> ScalingFit:
    """Least-squares line through ``(log theta, log value)``."""
    theta = np.asarray(theta, float)
    values = np.asarray(values, float)
    if theta_range is not None:
        lo, hi = theta_range
        keep = (theta >= lo * (1 - 1e-12)) & (theta <= hi * (1 + 1e-12))
        theta, values = theta[keep], values[keep]
    if theta.size < 5:
        raise ValueError(f"need at least 5 samples in range for a fit, got {theta.size}")
    if np.any(theta <= 0) or np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ValueError("fit needs positive theta and finite positive values")
    res = stats.linregress(np.log(theta), np.log(values))
    rng = (float(theta.min()), float(theta.max()))
    return ScalingFit(float(res.slope), float(res.intercept), float(res.rvalue ** 2), rng,
                      int(theta.size))


def fit_scaling(samples: Sequence[fi.FisherSample], which: str = "quantum",
                theta_range=DEFAULT_FIT_RANGE) -> ScalingFit:
    """Fit ``log delta_theta`` against ``log theta`` for the quantum or classical bound."""
    if which == "quantum":
        err = [s.dq_error for s in samples]
    elif which == "classical":
        err = [s.dc_error for s in samples]
    else:
        raise ValueError(f"which must be 'quantum' or 'classical', got {which!r}")
    return fit_power_law([s.theta for s in samples], err, theta_range)


@dataclass(frozen=True)
class SweepCell:
    g: float
    J: float
    kind: str
    abs_det: float
    eigenvalues: tuple


def sweep_surface(g_values, gamma: float, J_values, tol: float = DEFAULT_CLASS_TOL) -> list[SweepCell]:
    """Classify every ``(g, J)`` pair, row-major with ``g`` as the slow index.

    ``g_values`` / ``J_values`` are explicit grids; use :func:`grid` to build
    them from a range and a resolution.
    """
    cells = []
    for g in np.asarray(g_values, float):
        for J in np.asarray(J_values, float):
            H = generator_matrix(g, J, gamma)
            ev = np.linalg.eigvals(H)
            ev = tuple(sorted(ev, key=lambda z: (round(z.real, 12), round(z.imag, 12))))
            cells.append(SweepCell(float(g), float(J), classify(g, gamma, J, tol).kind,
                                   float(abs(np.linalg.det(H))), ev))
    return cells


def grid(lo: float, hi: float, resolution: int) -> np.ndarray:
    if resolution < 1:
        raise ValueError(f"resolution must be positive, got {resolution}")
    return np.linspace(lo, hi, resolution)


def theta_grid(lo: float = 1e-3, hi: float = 1e-2, count: int = 20,
               spacing: str = "log") -> np.ndarray:
    if not 0 < lo < hi or count < 2:
        raise ValueError(f"bad theta grid lo={lo}, hi={hi}, count={count}")
    if spacing == "log":
        return np.logspace(np.log10(lo), np.log10(hi), count)
    if spacing == "linear":
        return np.linspace(lo, hi, count)
    raise ValueError(f"spacing must be 'log' or 'linear', got {spacing!r}")


@dataclass
class ScenarioReport:
    config: dict
    classification: SingularityClass | None = None
    expansion: LaurentExpansion | None = None
    samples: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    cells: list = field(default_factory=list)
    asymptotics: fi.AsymptoticCoefficients | None = None
    diagnostics: list = field(default_factory=list)


def run_scenario(config) -> ScenarioReport:
    """Classify, expand, compute Fisher curves and fit, as the scenario requires.

    ``config`` is a :class:`hedsense.config.RunConfig`.
    """
    p: SystemParams = config.params
    report = ScenarioReport(config=config.echo())
    diag = report.diagnostics
    gamma = p.gamma[0]

    if config.scenario == "sweep":
        gs = grid(config.sweep_g[0], config.sweep_g[1], config.sweep_resolution)
        Js = grid(config.sweep_J[0], config.sweep_J[1], config.sweep_resolution)
        report.cells = sweep_surface(gs, gamma, Js, config.class_tol)
        return report

    if p.balanced:
        report.classification = classify(p.g, gamma, p.J, config.class_tol)
    else:
        diag.append("unbalanced gamma: classification skipped")
    if config.scenario == "classify":
        return report

    gen = build_generator(p)
    pert = build_perturbation(config.perturbation, config.perturbation_matrix)
    cpl = build_couplings(p)
    inp = config.input_spec()

    try:
        report.expansion = expand_generator(gen.sH, pert.sn, config.truncation, config.rank_tol)
    except PoleOrderError as exc:
        diag.append(f"expansion failed: {exc}")
    if config.scenario == "expand":
        return report

    grid_ = theta_grid(*config.theta_grid)
    report.samples = fi.fisher_curve(gen, pert, inp, cpl, grid_, diagnostics=diag)

    exp = report.expansion
    try:
        if exp is not None and exp.pole_order >= 1:
            report.asymptotics = fi.asymptotic_b0(exp, pert, inp, cpl)
        else:
            report.asymptotics = fi.asymptotic_a0(gen, pert, inp, cpl)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        diag.append(f"asymptotic coefficients unavailable: {exc}")

    if config.scenario == "scaling":
        for which in ("quantum", "classical"):
            try:
                report.fits[which] = fit_scaling(report.samples, which, config.fit_range)
            except ValueError as exc:
                diag.append(f"{which} fit failed: {exc}")
    return report
