"""Ordinary least squares for the bias regressions.

Each model regresses one sampling-error measure on attribute influence,
group-size difference, their interaction, sample size and k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SingularMatrixError

COLUMNS = ("intercept", "attr_infl", "grp_size_diff", "attr_infl:grp_size_diff",
           "sample_size", "top_k")

RESPONSES = ("ncgr", "bias")

# |t| cut-offs standing in for p < 0.01 and p < 0.001 at large n
T_STAR2 = 2.58
T_STAR3 = 3.29


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    X: np.ndarray
    y: np.ndarray
    columns: tuple = COLUMNS
    response: str = ""
    method: str = ""

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[1] != len(self.columns):
            raise InputError("design matrix width does not match column names")
        if self.X.shape[0] != self.y.shape[0]:
            raise InputError("response length does not match design rows")
        if not (np.isfinite(self.X).all() and np.isfinite(self.y).all()):
            raise InputError("design matrix contains non-finite entries")


@dataclass(frozen=True, eq=False)
class RegressionResult:
    columns: tuple
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    r_squared: float
    n_obs: int
    response: str = ""
    method: str = ""

    def coef(self, name):
        return float(self.coefficients[self.columns.index(name)])

    def t(self, name):
        return float(self.t_stats[self.columns.index(name)])

    def stars(self, name):
        return significance_stars(self.t(name))


def significance_stars(t):
    t = abs(t)
    if t >= T_STAR3:
        return "***"
    if t >= T_STAR2:
        return "**"
    return ""


def attribute_influence(h):
    """0 for attribute-blind linking (h = 0.5), 1 at either extreme."""
    return 2.0 * abs(h - 0.5)


def group_size_difference(f):
    """0 for balanced groups, approaching 1 as the minority vanishes."""
    return 1.0 - 2.0 * f


def response_value(record, kind):
    if kind == "bias":
        return record.bias_topk
    if kind == "ncgr":
        return abs(record.log_ncgr_min) + abs(record.log_ncgr_maj)
    raise InputError(f"unknown response kind {kind!r}; expected one of {RESPONSES}")


def build_design_matrix(records, response_kind):
    records = list(records)
    methods = {r.method for r in records}
    if len(methods) > 1:
        raise InputError(f"records mix sampling methods: {sorted(methods)}")
    if len(records) < len(COLUMNS) + 1:
        raise SingularMatrixError(
            f"need at least {len(COLUMNS) + 1} observations, got {len(records)}")
    rows = []
    for r in records:
        a = attribute_influence(r.h)
        g = group_size_difference(r.f)
        rows.append((1.0, a, g, a * g, r.sample_fraction, float(r.k)))
    y = np.array([response_value(r, response_kind) for r in records], dtype=float)
    return DesignMatrix(np.array(rows, dtype=float), y, COLUMNS, response_kind, methods.pop())


def collinear_columns(X, columns, rtol=1e-10):
    """Names of columns that lie in the span of the columns before them."""
    kept = []
    bad = []
    for j in range(X.shape[1]):
        col = X[:, j]
        scale = np.linalg.norm(col)
        if scale == 0.0:
            bad.append(columns[j])
            continue
        if kept:
            basis = X[:, kept]
            coef, *_ = np.linalg.lstsq(basis, col, rcond=None)
            resid = np.linalg.norm(col - basis @ coef)
        else:
            resid = scale
        if resid <= rtol * scale:
            bad.append(columns[j])
        else:
            kept.append(j)
    return bad


def ols_fit(design):
    """Least squares via a thin QR factorisation.

    Standard errors use the unbiased residual variance; R^2 is
    ``1 - SSR/SST`` about the mean of ``y`` (0 when ``y`` is constant).
    """
    X, y = design.X, design.y
    n, p = X.shape
    if n < p:
        raise SingularMatrixError(f"{n} observations cannot identify {p} coefficients")
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-10 * max(diag.max(), 1.0):
        bad = collinear_columns(X, design.columns)
        raise SingularMatrixError(
            f"design matrix is rank deficient; collinear columns: {', '.join(bad) or '?'}", bad)
    beta = _back_substitute(R, Q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    dof = n - p
    sigma2 = ssr / dof if dof > 0 else float("nan")
    R_inv = _back_substitute(R, np.eye(p))
    se = np.sqrt(sigma2 * np.sum(R_inv ** 2, axis=1))
    centred = y - y.mean()
    sst = float(centred @ centred)
    r2 = 0.0 if sst == 0.0 else max(0.0, min(1.0, 1.0 - ssr / sst))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    return RegressionResult(tuple(design.columns), beta, se, t, r2, n,
                            design.response, design.method)


def _back_substitute(R, b):
    """Solve ``R x = b`` for upper-triangular ``R``; ``b`` may be a matrix."""
    b = np.array(b, dtype=float)
    p = R.shape[0]
    x = np.zeros_like(b)
    for i in range(p - 1, -1, -1):
        x[i] = (b[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def fit_table(records, methods, responses=RESPONSES):
    """One fit per (method, response), keyed by that pair."""
    out = {}
    for method in methods:
        subset = [r for r in records if r.method == method]
        for kind in responses:
            out[(method, kind)] = ols_fit(build_design_matrix(subset, kind))
    return out


def format_table(results, methods, responses=RESPONSES):
    """Plain-text table: one column per model, coefficients with stars, R^2 last."""
    keys = [(m, r) for m in methods for r in responses]
    head = ["term"] + [f"{m}:{r}" for m, r in keys]
    lines = [head]
    for name in COLUMNS:
        row = [name]
        for key in keys:
            res = results[key]
            row.append(f"{res.coef(name):.4f}{res.stars(name)}")
        lines.append(row)
    lines.append(["R2"] + [f"{results[k].r_squared:.3f}" for k in keys])
    lines.append(["n_obs"] + [str(results[k].n_obs) for k in keys])
    widths = [max(len(r[i]) for r in lines) for i in range(len(head))]
    text = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in lines]
    text.append(f"** |t| >= {T_STAR2}; *** |t| >= {T_STAR3}")
    return "\n".join(text) + "\n"
