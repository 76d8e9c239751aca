"""Pairwise-comparison weighting with Saaty-style consistency testing.

Judgment matrices arrive in two forms. A raw matrix holds Saaty-scale
pairwise comparisons: unit diagonal, reciprocal off-diagonal entries.
Published assessment tables often print the column-normalized form
instead, which is column-stochastic and therefore has a dominant
eigenvalue of exactly 1, carrying no consistency information on its own.
Dividing each column of a normalized matrix by its diagonal entry
restores the unit self-comparisons and recovers the comparison scale;
every eigenvalue-based quantity here is computed on that reconstruction.
Weights are unaffected by the choice, since column normalization is
idempotent up to scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

# Saaty random-consistency index by matrix order.
RANDOM_INDEX = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

CR_THRESHOLD = 0.1
RECIPROCAL_RTOL = 1e-9
COLUMN_SUM_ATOL = 1e-3


class MatrixKind(Enum):
    RAW_SAATY = "raw_saaty"
    COLUMN_NORMALIZED = "column_normalized"


@dataclass
class JudgmentMatrix:
    """A square pairwise-comparison matrix plus its interpretation."""

    entries: np.ndarray
    kind: MatrixKind = MatrixKind.RAW_SAATY
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if self.labels is not None:
            self.labels = tuple(self.labels)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


@dataclass
class ValidationReport:
    valid: bool
    violations: list[str] = field(default_factory=list)


@dataclass
class WeightReport:
    weights: np.ndarray
    lambda_max: float
    ci: float
    ri: float
    cr: float
    consistent: bool
    labels: tuple[str, ...] | None = None


@dataclass
class EmbeddedWeights:
    dimension: int
    values: np.ndarray
    mapping: dict[str, int]


def validate_matrix(m: JudgmentMatrix) -> ValidationReport:
    """Report every violated structural invariant. Never raises."""
    violations: list[str] = []
    a = m.entries
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        violations.append(f"matrix must be square, got shape {a.shape}")
        return ValidationReport(False, violations)
    n = a.shape[0]
    if n < 2:
        violations.append(f"order {n} below minimum 2")
    if not np.all(np.isfinite(a)):
        violations.append("non-finite entry")
    elif np.any(a <= 0):
        i, j = np.argwhere(a <= 0)[0]
        violations.append(f"non-positive entry at ({i}, {j})")
    else:
        if m.kind is MatrixKind.RAW_SAATY:
            diag = np.diag(a)
            if not np.allclose(diag, 1.0, rtol=RECIPROCAL_RTOL, atol=0.0):
                violations.append("diagonal entry differs from 1")
            prod = a * a.T
            if not np.allclose(prod, 1.0, rtol=RECIPROCAL_RTOL, atol=0.0):
                i, j = np.argwhere(np.abs(prod - 1.0) > RECIPROCAL_RTOL * 2)[0]
                violations.append(f"reciprocity violated at ({i}, {j})")
        else:
            sums = a.sum(axis=0)
            bad = np.abs(sums - 1.0) > COLUMN_SUM_ATOL + 1e-12
            if np.any(bad):
                j = int(np.flatnonzero(bad)[0])
                violations.append(f"column {j} sums to {sums[j]:.6g}, expected 1 within {COLUMN_SUM_ATOL}")
    if m.labels is not None and len(m.labels) != n:
        violations.append(f"{len(m.labels)} labels for order {n}")
    return ValidationReport(not violations, violations)


def _comparison_scale(m: JudgmentMatrix) -> np.ndarray:
    """The matrix on which eigenvalue arithmetic runs.

    Raw matrices are used as-is. Column-normalized matrices are rescaled
    column by column so the diagonal returns to 1; for a matrix that was
    produced by column-normalizing a unit-diagonal comparison matrix this
    recovers the original exactly.
    """
    if m.kind is MatrixKind.RAW_SAATY:
        return m.entries
    return m.entries / np.diag(m.entries)


def _require_valid(m: JudgmentMatrix) -> None:
    report = validate_matrix(m)
    if not report.valid:
        raise ValueError("invalid judgment matrix: " + "; ".join(report.violations))


def derive_weights(m: JudgmentMatrix, ri_table: Mapping[int, float] | None = None) -> WeightReport:
    """Summation-method weights plus the consistency ratio test.

    Procedure: column-normalize, row-sum, normalize the row sums into the
    weight vector W, then estimate the principal eigenvalue as the mean of
    (A W)_i / W_i over rows. CI = (lambda - n)/(n - 1), CR = CI / RI(n),
    and the matrix passes when CR < 0.1.

    Args:
        m: a valid judgment matrix of either kind.
        ri_table: optional replacement random-index table keyed by order.

    Raises:
        ValueError: if the matrix fails validation or a weight degenerates
            to zero.
    """
    _require_valid(m)
    a = _comparison_scale(m)
    n = m.order
    b = a / a.sum(axis=0)
    row_sums = b.sum(axis=1)
    weights = row_sums / row_sums.sum()
    if np.any(weights == 0.0):
        raise ValueError("degenerate weight")
    lambda_max = float(np.mean((a @ weights) / weights))
    ci = (lambda_max - n) / (n - 1)
    cr = consistency_ratio(ci, n, ri_table)
    table = RANDOM_INDEX if ri_table is None else ri_table
    ri = 0.0 if n <= 2 else float(table[n])
    return WeightReport(
        weights=weights,
        lambda_max=lambda_max,
        ci=ci,
        ri=ri,
        cr=cr,
        consistent=cr < CR_THRESHOLD,
        labels=m.labels,
    )


def consistency_ratio(ci: float, n: int, ri_table: Mapping[int, float] | None = None) -> float:
    """CI scaled by the random index for order n; 0 for n <= 2."""
    if n < 1:
        raise ValueError(f"matrix order must be positive, got {n}")
    if n <= 2:
        return 0.0
    table = RANDOM_INDEX if ri_table is None else ri_table
    if n not in table:
        raise ValueError(f"RI undefined beyond order {max(table)}")
    return ci / table[n]


def exact_max_eigenvalue(m: JudgmentMatrix, rel_tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Principal eigenvalue by power iteration, the oracle for derive_weights.

    Positive matrices have a real dominant eigenvalue (Perron root), so the
    iteration converges from a positive start vector. Column-normalized
    input is rescaled to the comparison scale first, same as derive_weights.
    """
    _require_valid(m)
    a = _comparison_scale(m)
    x = np.ones(m.order) / m.order
    lam = 0.0
    for _ in range(max_iter):
        y = a @ x
        lam_new = float(y.sum())  # x is normalized to unit 1-norm, entries positive
        x = y / lam_new
        if abs(lam_new - lam) <= rel_tol * abs(lam_new):
            return lam_new
        lam = lam_new
    raise ValueError("oracle did not converge")


def embed_weights(
    w: WeightReport | Sequence[float] | np.ndarray,
    mapping: Mapping[str, int],
    dimension: int,
) -> EmbeddedWeights:
    """Place a weight vector into a larger indicator layer, zeros elsewhere.

    Mapping keys are indicator labels, values are target slots. When the
    source report carries labels, placement is by label; otherwise mapping
    entries are paired with the weights in insertion order.
    """
    if isinstance(w, WeightReport):
        weights = np.asarray(w.weights, dtype=float)
        labels = w.labels
    else:
        weights = np.asarray(w, dtype=float)
        labels = None
    if len(mapping) != len(weights):
        raise ValueError(f"mapping has {len(mapping)} entries for {len(weights)} weights")
    positions = list(mapping.values())
    if len(set(positions)) != len(positions):
        raise ValueError("mapping collision")
    for label, pos in mapping.items():
        if not 0 <= pos < dimension:
            raise ValueError(f"slot {pos} for {label!r} outside dimension {dimension}")
    values = np.zeros(dimension)
    if labels is not None:
        for label, pos in mapping.items():
            if label not in labels:
                raise ValueError(f"label {label!r} not present in weight report")
            values[pos] = weights[labels.index(label)]
    else:
        for (label, pos), weight in zip(mapping.items(), weights):
            values[pos] = weight
    return EmbeddedWeights(dimension=dimension, values=values, mapping=dict(mapping))


_KIND_TOKENS = {
    "raw": MatrixKind.RAW_SAATY,
    "rawsaaty": MatrixKind.RAW_SAATY,
    "saaty": MatrixKind.RAW_SAATY,
    "normalized": MatrixKind.COLUMN_NORMALIZED,
    "columnnormalized": MatrixKind.COLUMN_NORMALIZED,
}


def _parse_entry(token: str, path: Path, lineno: int) -> float:
    # raw Saaty files habitually write reciprocals as fractions, e.g. 1/9
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            return float(num) / float(den)
        return float(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{path}:{lineno}: invalid matrix entry {token!r}") from None


def load_matrix_file(path: str | Path) -> JudgmentMatrix:
    """Read a matrix file: first line `n kind`, then n whitespace-split rows.

    Comment lines start with `#`; a comment whose token count equals n
    supplies the indicator labels.
    """
    path = Path(path)
    header: tuple[int, MatrixKind] | None = None
    comments: list[list[str]] = []
    rows: list[list[float]] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].split())
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ValueError(f"{path}:{lineno}: expected header `n kind`, got {line!r}")
            try:
                n = int(tokens[0])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: invalid matrix order {tokens[0]!r}") from None
            kind_token = tokens[1].lower().replace("_", "").replace("-", "")
            if kind_token not in _KIND_TOKENS:
                raise ValueError(f"{path}:{lineno}: unknown matrix kind {tokens[1]!r}")
            header = (n, _KIND_TOKENS[kind_token])
            continue
        n = header[0]
        if len(tokens) != n:
            raise ValueError(f"{path}:{lineno}: expected {n} values, got {len(tokens)}")
        rows.append([_parse_entry(tok, path, lineno) for tok in tokens])
    if header is None:
        raise ValueError(f"{path}: missing `n kind` header line")
    n, kind = header
    if len(rows) != n:
        raise ValueError(f"{path}: expected {n} rows, got {len(rows)}")
    labels = next((tuple(c) for c in comments if len(c) == n), None)
    return JudgmentMatrix(entries=np.array(rows), kind=kind, labels=labels)
