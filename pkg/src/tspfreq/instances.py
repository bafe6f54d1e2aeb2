"""Symmetric TSP instances: TSPLIB parsing, tour files, random generation, perturbation.

Distance evaluation reproduces the TSPLIB 95 rounding rules bit-exactly for
EUC_2D (nearest-integer Euclidean), ATT (pseudo-Euclidean with ceiling
adjustment) and GEO (geographical, earth radius 6378.388).  Explicit matrices
are supported in FULL_MATRIX, UPPER_ROW and LOWER_DIAG_ROW layouts.

All instances are complete symmetric graphs on n >= 4 vertices with strictly
positive distances.  Instances are immutable after construction and safe to
share across worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

EUC_2D = "EUC_2D"
ATT = "ATT"
GEO = "GEO"
EXPLICIT_MATRIX = "EXPLICIT_MATRIX"
RANDOM_UNIFORM = "RANDOM_UNIFORM"

COORD_MODELS = (EUC_2D, ATT, GEO)
WEIGHT_MODELS = COORD_MODELS + (EXPLICIT_MATRIX, RANDOM_UNIFORM)

MIN_VERTICES = 4  # a frequency quartet needs four vertices
_GEO_RADIUS = 6378.388
_GEO_PI = 3.141592
_MAX_MATRIX_N = 6000  # full matrix above this would not fit desk-scale memory

DEFAULT_PERTURB_RATIO = 1e-6  # default magnitude = ratio * min positive distance


class ParseError(ValueError):
    """Malformed or unsupported instance/tour file."""


@dataclass(frozen=True)
class Perturbation:
    """Record of the additive tie-breaking noise applied to an instance."""

    seed: int
    magnitude: float


@dataclass(frozen=True)
class Tour:
    """A cycle through vertices, with its total length under some instance."""

    order: tuple[int, ...]
    length: float

    @property
    def n(self) -> int:
        return len(self.order)

    def edges(self) -> set[tuple[int, int]]:
        """Unordered cycle edges as (min, max) pairs."""
        out = set()
        for a, b in zip(self.order, self.order[1:] + self.order[:1]):
            out.add((a, b) if a < b else (b, a))
        return out


def _nint(x: np.ndarray) -> np.ndarray:
    # TSPLIB nint(): round half away from zero for positive magnitudes
    return np.floor(x + 0.5)


def _euc2d_distances(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    return _nint(np.sqrt(dx * dx + dy * dy))


def _att_distances(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    rij = np.sqrt((dx * dx + dy * dy) / 10.0)
    tij = _nint(rij)
    return np.where(tij < rij, tij + 1.0, tij)


def _geo_radians(coords: np.ndarray) -> np.ndarray:
    deg = np.trunc(coords)
    minutes = coords - deg
    return _GEO_PI * (deg + 5.0 * minutes / 3.0) / 180.0


def _geo_distances(lat_i, lon_i, lat_j, lon_j) -> np.ndarray:
    q1 = np.cos(lon_i - lon_j)
    q2 = np.cos(lat_i - lat_j)
    q3 = np.cos(lat_i + lat_j)
    arg = 0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)
    return np.trunc(_GEO_RADIUS * np.arccos(np.clip(arg, -1.0, 1.0)) + 1.0)


class Instance:
    """A complete symmetric TSP instance with exact distance evaluation."""

    def __init__(
        self,
        n: int,
        weight_model: str,
        *,
        coords: np.ndarray | None = None,
        matrix: np.ndarray | None = None,
        name: str | None = None,
        perturbation: Perturbation | None = None,
    ):
        if weight_model not in WEIGHT_MODELS:
            raise ValueError(f"unknown weight model {weight_model!r}")
        if n < MIN_VERTICES:
            raise ValueError(f"need at least {MIN_VERTICES} vertices, got {n}")
        self.n = int(n)
        self.weight_model = weight_model
        self.name = name
        self.perturbation = perturbation
        self._coords = None
        self._matrix = None
        if weight_model in COORD_MODELS:
            if coords is None:
                raise ValueError(f"{weight_model} instance needs coordinates")
            coords = np.asarray(coords, dtype=np.float64)
            if coords.shape != (n, 2):
                raise ValueError(f"expected {n}x2 coordinates, got {coords.shape}")
            self._coords = coords
            self._coords.setflags(write=False)
        else:
            if matrix is None:
                raise ValueError(f"{weight_model} instance needs a matrix")
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=np.float64)
            if matrix.shape != (n, n):
                raise ValueError(f"expected {n}x{n} matrix, got {matrix.shape}")
            if not np.array_equal(matrix, matrix.T):
                raise ValueError("distance matrix is not symmetric")
            off = ~np.eye(n, dtype=bool)
            if not np.all(matrix[off] > 0):
                raise ValueError("distances must be strictly positive")
            self._matrix = matrix
            self._matrix.setflags(write=False)
        # TSPLIB models and explicit integer matrices evaluate to exact integers
        if self._matrix is not None and weight_model != RANDOM_UNIFORM and perturbation is None:
            self.integer_valued = bool(np.array_equal(self._matrix, np.trunc(self._matrix)))
        else:
            self.integer_valued = weight_model in COORD_MODELS and perturbation is None

    @property
    def coords(self) -> np.ndarray | None:
        return self._coords

    def _compute_block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Distance block for coordinate models (exact TSPLIB rounding)."""
        c = self._coords
        if self.weight_model == GEO:
            rad = _geo_radians(c)
            lat_i = rad[rows, 0][:, None]
            lon_i = rad[rows, 1][:, None]
            lat_j = rad[cols, 0][None, :]
            lon_j = rad[cols, 1][None, :]
            return _geo_distances(lat_i, lon_i, lat_j, lon_j)
        dx = c[rows, 0][:, None] - c[cols, 0][None, :]
        dy = c[rows, 1][:, None] - c[cols, 1][None, :]
        if self.weight_model == ATT:
            return _att_distances(dx, dy)
        return _euc2d_distances(dx, dy)

    def matrix(self) -> np.ndarray:
        """Full distance matrix (float64; integer-valued for TSPLIB models)."""
        if self._matrix is None:
            if self.n > _MAX_MATRIX_N:
                raise ValueError(
                    f"refusing to materialize a {self.n}x{self.n} matrix; "
                    "use dist_submatrix on selections instead"
                )
            idx = np.arange(self.n)
            m = self._compute_block(idx, idx)
            np.fill_diagonal(m, 0.0)
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def dist_submatrix(self, vertices: Sequence[int]) -> np.ndarray:
        """Distance submatrix over the given vertices (diagonal zero)."""
        sel = np.asarray(vertices, dtype=np.intp)
        if self._matrix is not None or self.n <= _MAX_MATRIX_N:
            return np.ascontiguousarray(self.matrix()[np.ix_(sel, sel)])
        m = self._compute_block(sel, sel)
        np.fill_diagonal(m, 0.0)
        return m

    def distance(self, u: int, v: int) -> float | int:
        """Exact distance between two distinct vertices."""
        if u == v:
            raise ValueError(f"distance({u},{u}) is undefined on a TSP instance")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range: ({u},{v}) with n={self.n}")
        if self._matrix is not None:
            d = float(self._matrix[u, v])
        else:
            d = float(self._compute_block(np.array([u]), np.array([v]))[0, 0])
        return int(d) if self.integer_valued else d

    def tour_length(self, order: Sequence[int]) -> float | int:
        total = 0
        for a, b in zip(order, list(order[1:]) + [order[0]]):
            total += self.distance(a, b)
        return total

    def min_positive_distance(self) -> float:
        m = self.matrix()
        off = ~np.eye(self.n, dtype=bool)
        return float(m[off].min())

    def __repr__(self) -> str:
        tag = self.name or "unnamed"
        return f"Instance({tag}, n={self.n}, model={self.weight_model})"


# ---------------------------------------------------------------------------
# TSPLIB parsing
# ---------------------------------------------------------------------------

_SUPPORTED_WEIGHT_TYPES = {"EUC_2D": EUC_2D, "ATT": ATT, "GEO": GEO, "EXPLICIT": EXPLICIT_MATRIX}
_SUPPORTED_FORMATS = {"FULL_MATRIX", "UPPER_ROW", "LOWER_DIAG_ROW"}


def _split_spec_line(line: str) -> tuple[str, str]:
    if ":" in line:
        key, _, val = line.partition(":")
        return key.strip().upper(), val.strip()
    return line.strip().upper(), ""


def parse_tsplib(text: str, name: str | None = None) -> Instance:
    """Parse a TSPLIB .tsp file into an Instance.

    Supports EDGE_WEIGHT_TYPE in {EUC_2D, ATT, GEO, EXPLICIT}; explicit
    matrices may be FULL_MATRIX, UPPER_ROW or LOWER_DIAG_ROW.
    """
    lines = text.splitlines()
    spec: dict[str, str] = {}
    coord_rows: list[tuple[int, float, float]] = []
    weight_tokens: list[float] = []
    section = None
    dimension = None

    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if upper in ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION"):
            section = upper
            continue
        if section is None or (":" in line and line.split(":")[0].strip().upper() in (
            "NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE",
            "EDGE_WEIGHT_FORMAT", "NODE_COORD_TYPE", "DISPLAY_DATA_TYPE", "CAPACITY",
        )):
            key, val = _split_spec_line(line)
            spec[key] = val
            section = None
            continue
        if section == "NODE_COORD_SECTION":
            parts = line.split()
            if len(parts) < 3:
                raise ParseError(f"malformed coordinate line: {line!r}")
            try:
                coord_rows.append((int(parts[0]), float(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise ParseError(f"malformed coordinate line: {line!r}") from exc
        elif section == "EDGE_WEIGHT_SECTION":
            try:
                weight_tokens.extend(float(tok) for tok in line.split())
            except ValueError as exc:
                raise ParseError(f"malformed weight line: {line!r}") from exc
        # DISPLAY_DATA_SECTION is ignored

    if "DIMENSION" in spec:
        try:
            dimension = int(spec["DIMENSION"].split()[0])
        except ValueError as exc:
            raise ParseError(f"bad DIMENSION: {spec['DIMENSION']!r}") from exc
    if dimension is None:
        raise ParseError("missing DIMENSION")
    if dimension < MIN_VERTICES:
        raise ParseError(f"need at least {MIN_VERTICES} vertices, got DIMENSION {dimension}")
    ftype = spec.get("TYPE", "TSP").split()[0].upper() if spec.get("TYPE") else "TSP"
    if ftype not in ("TSP", ""):
        raise ParseError(f"unsupported problem TYPE {ftype!r} (symmetric TSP only)")

    wtype = spec.get("EDGE_WEIGHT_TYPE", "").upper()
    if wtype not in _SUPPORTED_WEIGHT_TYPES:
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {wtype!r}")
    model = _SUPPORTED_WEIGHT_TYPES[wtype]
    inst_name = name or spec.get("NAME") or None

    if model in COORD_MODELS:
        if len(coord_rows) != dimension:
            raise ParseError(
                f"DIMENSION {dimension} but {len(coord_rows)} coordinate lines"
            )
        coords = np.zeros((dimension, 2))
        seen = set()
        for idx, x, y in coord_rows:
            if not (1 <= idx <= dimension):
                raise ParseError(f"coordinate index {idx} out of range 1..{dimension}")
            if idx in seen:
                raise ParseError(f"duplicate coordinate index {idx}")
            seen.add(idx)
            coords[idx - 1] = (x, y)
        return Instance(dimension, model, coords=coords, name=inst_name)

    fmt = spec.get("EDGE_WEIGHT_FORMAT", "").upper()
    if fmt not in _SUPPORTED_FORMATS:
        raise ParseError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}")
    matrix = _matrix_from_tokens(weight_tokens, dimension, fmt)
    return Instance(dimension, EXPLICIT_MATRIX, matrix=matrix, name=inst_name)


def _matrix_from_tokens(tokens: list[float], n: int, fmt: str) -> np.ndarray:
    m = np.zeros((n, n))
    expected = {
        "FULL_MATRIX": n * n,
        "UPPER_ROW": n * (n - 1) // 2,
        "LOWER_DIAG_ROW": n * (n + 1) // 2,
    }[fmt]
    if len(tokens) != expected:
        raise ParseError(
            f"{fmt} with DIMENSION {n} needs {expected} weights, got {len(tokens)}"
        )
    it = iter(tokens)
    if fmt == "FULL_MATRIX":
        for u in range(n):
            for v in range(n):
                m[u, v] = next(it)
        if not np.array_equal(m, m.T):
            raise ParseError("FULL_MATRIX is not symmetric")
    elif fmt == "UPPER_ROW":
        for u in range(n):
            for v in range(u + 1, n):
                m[u, v] = m[v, u] = next(it)
    else:  # LOWER_DIAG_ROW
        for u in range(n):
            for v in range(u + 1):
                m[u, v] = m[v, u] = next(it)
    np.fill_diagonal(m, 0.0)
    return m


def parse_tour(text: str, inst: Instance) -> Tour:
    """Parse a TSPLIB .opt.tour file and price it under the given instance."""
    order: list[int] = []
    section = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "TOUR_SECTION":
            section = True
            continue
        if upper == "EOF":
            break
        if not section:
            continue
        for tok in line.split():
            val = int(tok)
            if val == -1:
                section = False
                break
            order.append(val - 1)  # TSPLIB tours are 1-based
    if not order:
        raise ParseError("no TOUR_SECTION entries found")
    if len(order) != inst.n:
        raise ParseError(f"tour lists {len(order)} vertices, instance has {inst.n}")
    seen = set()
    for v in order:
        if not (0 <= v < inst.n):
            raise ParseError(f"tour vertex {v + 1} out of range 1..{inst.n}")
        if v in seen:
            raise ParseError(f"tour repeats vertex {v + 1}")
        seen.add(v)
    return Tour(order=tuple(order), length=inst.tour_length(order))


def tour_to_text(tour: Tour, name: str = "tour") -> str:
    lines = [f"NAME : {name}", "TYPE : TOUR", f"DIMENSION : {tour.n}", "TOUR_SECTION"]
    lines.extend(str(v + 1) for v in tour.order)
    lines.append("-1")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Generation and perturbation
# ---------------------------------------------------------------------------

def gen_random(n: int, seed: int) -> Instance:
    """Complete symmetric instance with i.i.d. uniform distances in (0, 10]."""
    if n < MIN_VERTICES:
        raise ValueError(f"need at least {MIN_VERTICES} vertices, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    m = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    vals = 10.0 * (1.0 - rng.random(len(iu[0])))  # uniform on (0, 10]
    m[iu] = vals
    m += m.T
    return Instance(n, RANDOM_UNIFORM, matrix=m, name=f"random-{n}-{seed}")


def perturb(inst: Instance, seed: int, magnitude: float | None = None) -> Instance:
    """Add independent additive noise in (0, magnitude] to every distance.

    Default magnitude is 1e-6 times the minimum positive distance, small
    enough to preserve every strict inequality between path lengths while
    making ties measure-zero.  Deterministic for a fixed (instance, seed).
    """
    if magnitude is None:
        magnitude = DEFAULT_PERTURB_RATIO * inst.min_positive_distance()
    if magnitude <= 0:
        raise ValueError(f"perturbation magnitude must be positive, got {magnitude}")
    m = inst.matrix().copy()
    n = inst.n
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    iu = np.triu_indices(n, k=1)
    noise = magnitude * (1.0 - rng.random(len(iu[0])))  # (0, magnitude]
    m[iu] += noise
    m.T[iu] = m[iu]
    return Instance(
        n,
        inst.weight_model if inst.weight_model == RANDOM_UNIFORM else EXPLICIT_MATRIX,
        matrix=m,
        name=inst.name,
        perturbation=Perturbation(seed=int(seed), magnitude=float(magnitude)),
    )


# ---------------------------------------------------------------------------
# Canonical CSV dump (test oracle interchange format)
# ---------------------------------------------------------------------------

def dump_csv(inst: Instance) -> str:
    """Canonical dump: header ``u,v,dist`` with u<v, ascending."""
    m = inst.matrix()
    lines = ["u,v,dist"]
    for u in range(inst.n):
        for v in range(u + 1, inst.n):
            d = m[u, v]
            val = str(int(d)) if inst.integer_valued else repr(float(d))
            lines.append(f"{u},{v},{val}")
    return "\n".join(lines) + "\n"


def load_csv(text: str, name: str | None = None) -> Instance:
    """Inverse of :func:`dump_csv`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "u,v,dist":
        raise ParseError("expected header 'u,v,dist'")
    entries = []
    maxv = -1
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise ParseError(f"malformed row: {ln!r}")
        u, v, d = int(parts[0]), int(parts[1]), float(parts[2])
        if u >= v:
            raise ParseError(f"rows must have u < v: {ln!r}")
        entries.append((u, v, d))
        maxv = max(maxv, v)
    n = maxv + 1
    if len(entries) != n * (n - 1) // 2:
        raise ParseError(f"expected {n * (n - 1) // 2} rows for n={n}, got {len(entries)}")
    m = np.zeros((n, n))
    for u, v, d in entries:
        m[u, v] = m[v, u] = d
    return Instance(n, EXPLICIT_MATRIX, matrix=m, name=name)


def all_edges(n: int) -> Iterable[tuple[int, int]]:
    """All unordered edges of a complete graph on n vertices, (u, v) with u < v."""
    for u in range(n):
        for v in range(u + 1, n):
            yield (u, v)
