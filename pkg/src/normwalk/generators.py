"""Bit-exact random polytope generation and frequency surveys.

Bits come from a file, an OS-entropy dump, or a cached HTTP fetch; they are
consumed strictly sequentially (MSB first within each byte) and never reused,
so identical bit files replay identical polytope streams.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

from .lattice import LatticePolytope, convex_hull
from .normality import is_integrally_closed
from .poset import is_maximal, is_minimal


class BitsExhausted(RuntimeError):
    """The bit source ran out mid-request."""


class BitSource:
    """Sequential reader over a fixed pool of bits.

    Bit i is bit (7 - i%8) of byte i//8: most significant first, n-bit
    integers are read big-endian.  The cursor only moves forward.
    """

    def __init__(self, data: bytes, origin: str = "file", path: str | None = None):
        self._data = data
        self.origin = origin
        self.path = path
        self.cursor = 0  # bit offset

    @classmethod
    def from_file(cls, path) -> "BitSource":
        data = Path(path).read_bytes()
        return cls(data, origin="file", path=str(path))

    @classmethod
    def from_os_entropy(cls, n_bytes: int, cache_path=None) -> "BitSource":
        """Draw OS entropy, optionally recording it to a replayable cache file."""
        data = os.urandom(n_bytes)
        if cache_path is not None:
            Path(cache_path).write_bytes(data)
            return cls(data, origin="os_entropy", path=str(cache_path))
        return cls(data, origin="os_entropy")

    @classmethod
    def fetch(cls, url: str, n_bytes: int, cache_path) -> "BitSource":
        """Fetch raw bytes from a true-random HTTP source into a cache file.

        All downstream computation reads only the cached file, keeping runs
        replayable regardless of the remote service.
        """
        from urllib.request import urlopen

        cache = Path(cache_path)
        if not cache.exists():
            with urlopen(url) as resp:  # noqa: S310 - explicit user-supplied URL
                cache.write_bytes(resp.read(n_bytes))
        data = cache.read_bytes()
        return cls(data, origin="http_fetcher", path=str(cache))

    @property
    def total_bits(self) -> int:
        return 8 * len(self._data)

    @property
    def remaining(self) -> int:
        return self.total_bits - self.cursor

    @property
    def exhausted(self) -> bool:
        return self.remaining == 0

    def sha256(self) -> str:
        return hashlib.sha256(self._data).hexdigest()

    def take_bit(self) -> int:
        if self.cursor >= self.total_bits:
            raise BitsExhausted("bit source exhausted")
        byte = self._data[self.cursor >> 3]
        bit = (byte >> (7 - (self.cursor & 7))) & 1
        self.cursor += 1
        return bit

    def take_uint(self, n_bits: int) -> int:
        if self.remaining < n_bits:
            raise BitsExhausted("bit source exhausted")
        value = 0
        for _ in range(n_bits):
            value = (value << 1) | self.take_bit()
        return value

    def take_uniform(self, n: int) -> int:
        """Uniform draw from range(n) by rejection sampling."""
        if n <= 0:
            raise ValueError("empty range")
        if n == 1:
            return 0
        width = (n - 1).bit_length()
        while True:
            v = self.take_uint(width)
            if v < n:
                return v

    def take_int_bounded(self, bound: int) -> int:
        """Uniform draw from [-bound, bound]."""
        return self.take_uniform(2 * bound + 1) - bound


@dataclass(frozen=True)
class ClusterSpec:
    """Step n of the pipeline: phi(n) polytopes on at most v vertices in Z^d."""

    n: int
    d: int
    v: int
    c: int = 1

    def __post_init__(self):
        if min(self.n, self.d, self.v) < 1 or self.c < 0:
            raise ValueError("cluster parameters must be positive (c may be 0)")

    @property
    def phi(self) -> int:
        return (self.n * self.d * self.v) ** self.c

    @property
    def bits_required(self) -> int:
        return self.n * self.d * self.v * self.phi


@dataclass(frozen=True)
class GeneratedPolytope:
    polytope: LatticePolytope
    cluster_n: int
    index: int
    bit_offset: int
    raw_points: tuple[tuple[int, ...], ...]

    @property
    def degenerate(self) -> bool:
        return self.polytope.dim < self.polytope.ambient_dim


def generate_cluster(src: BitSource, spec: ClusterSpec) -> list[GeneratedPolytope]:
    """Consume exactly spec.bits_required bits and hull them into polytopes.

    If the source cannot cover the whole cluster, nothing is consumed.
    """
    if src.remaining < spec.bits_required:
        raise BitsExhausted(
            f"cluster n={spec.n} needs {spec.bits_required} bits, "
            f"{src.remaining} remain"
        )
    out = []
    for index in range(spec.phi):
        offset = src.cursor
        points = tuple(
            tuple(src.take_uint(spec.n) for _ in range(spec.d))
            for _ in range(spec.v)
        )
        out.append(
            GeneratedPolytope(
                polytope=convex_hull(points),
                cluster_n=spec.n,
                index=index,
                bit_offset=offset,
                raw_points=points,
            )
        )
    return out


def theta(d: int) -> int:
    """Number of elementary factors sufficient to write any basis of Z^d."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return 36 + (3 * d * d - d) // 2


@dataclass(frozen=True)
class HexagonParams:
    """Parameters (a_k, i_k, j_k), k = 1..theta(d), with 1 <= i_k != j_k <= d."""

    d: int
    a: tuple[int, ...]
    positions: tuple[tuple[int, int], ...]

    def __post_init__(self):
        want = theta(self.d)
        if len(self.a) != want or len(self.positions) != want:
            raise ValueError(f"need exactly theta({self.d}) = {want} factors")
        for i, j in self.positions:
            if not (1 <= i <= self.d and 1 <= j <= self.d and i != j):
                raise ValueError(f"bad elementary position ({i}, {j})")


def elementary_product(params: HexagonParams):
    """Product of the elementary matrices e_{i_k j_k}^{a_k}, in order."""
    d = params.d
    M = [[1 if r == c else 0 for c in range(d)] for r in range(d)]
    for a, (i, j) in zip(params.a, params.positions):
        if a == 0:
            continue
        # right-multiply by I + a*e_ij: col_{j} += a * col_{i}
        for row in M:
            row[j - 1] += a * row[i - 1]
    return M


def hexagon_from_params(params: HexagonParams) -> LatticePolytope:
    """Hull of 0, the standard basis of R^{d+1}, and the rows (z_i, 1).

    The z-matrix is a product of determinant-one elementary matrices, hence
    itself a basis of Z^d.
    """
    d = params.d
    Z = elementary_product(params)
    points = [tuple(0 for _ in range(d + 1))]
    for i in range(d + 1):
        points.append(tuple(1 if j == i else 0 for j in range(d + 1)))
    for row in Z:
        points.append(tuple(row) + (1,))
    return convex_hull(points)


def systematic_positions(d: int, count: int):
    """Ordered pairs (i, j), i != j, cycled lexicographically."""
    pairs = [(i, j) for i in range(1, d + 1) for j in range(1, d + 1) if i != j]
    return tuple(pairs[k % len(pairs)] for k in range(count))


def hexagon_params_from_bits(
    src: BitSource, d: int, bound: int, systematic: bool = True
) -> HexagonParams:
    """Draw the exponents from bits; positions systematically or from bits."""
    count = theta(d)
    a = tuple(src.take_int_bounded(bound) for _ in range(count))
    if systematic:
        positions = systematic_positions(d, count)
    else:
        pairs = [(i, j) for i in range(1, d + 1) for j in range(1, d + 1) if i != j]
        positions = tuple(pairs[src.take_uniform(len(pairs))] for _ in range(count))
    return HexagonParams(d=d, a=a, positions=positions)


# --- frequency surveys ----------------------------------------------------------

CHECK_ORDER = ("normal", "minimal", "maximal")


@dataclass
class SurveyStats:
    counts: dict = field(default_factory=dict)
    per_cluster: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    def count(self, key: str) -> int:
        return self.counts.get(key, 0)


def survey(items, checks=("normal", "minimal", "maximal")) -> SurveyStats:
    """Classify a polytope stream: normal, then minimal, then maximal.

    Accepts GeneratedPolytope records (provenance kept) or bare polytopes.
    Non-normal polytopes skip the later checks; isolated candidates are the
    simultaneously minimal and maximal ones.
    """
    checks = set(checks)
    if not checks:
        raise ValueError("no checks requested")
    if checks & {"minimal", "maximal"}:
        checks.add("normal")
    unknown = checks - set(CHECK_ORDER)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    stats = SurveyStats()
    for key in ("total", "degenerate", "normal", "minimal", "maximal",
                "isolated_candidate"):
        stats.counts[key] = 0
    for item in items:
        if isinstance(item, GeneratedPolytope):
            P = item.polytope
            provenance = {
                "cluster_n": item.cluster_n,
                "index": item.index,
                "bit_offset": item.bit_offset,
            }
            cluster_key = item.cluster_n
        else:
            P = item
            provenance = {}
            cluster_key = None
        record = dict(provenance)
        stats.counts["total"] += 1
        bucket = stats.per_cluster.setdefault(
            cluster_key,
            {k: 0 for k in ("total", "degenerate", "normal", "minimal", "maximal",
                            "isolated_candidate")},
        )
        bucket["total"] += 1
        degenerate = P.dim < P.ambient_dim
        if degenerate:
            stats.counts["degenerate"] += 1
            bucket["degenerate"] += 1
        record["degenerate"] = degenerate
        normal = None
        if "normal" in checks:
            normal, _ = is_integrally_closed(P)
            record["normal"] = normal
            if normal:
                stats.counts["normal"] += 1
                bucket["normal"] += 1
        minimal = maximal = None
        if normal:
            if "minimal" in checks:
                minimal = is_minimal(P)
                record["minimal"] = minimal
                if minimal:
                    stats.counts["minimal"] += 1
                    bucket["minimal"] += 1
            if "maximal" in checks:
                maximal = is_maximal(P) if not degenerate else False
                record["maximal"] = maximal
                if maximal:
                    stats.counts["maximal"] += 1
                    bucket["maximal"] += 1
            if minimal and maximal:
                stats.counts["isolated_candidate"] += 1
                bucket["isolated_candidate"] += 1
                record["isolated_candidate"] = True
        stats.records.append(record)
    return stats
