"""JSON/CSV serialization: canonical key order, integers as decimal strings.

Every reader accepts exactly what the paired writer emits, so round trips are
byte-identical; coordinates are decimal strings to keep huge integers safe in
non-Python consumers, rationals travel as "p/q".
"""
from __future__ import annotations

import json
from fractions import Fraction

from .continuous import RationalPolytope, rational_hull
from .cones import RationalCone, cone
from .lattice import LatticePolytope, convex_hull


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def compact_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def int_str(x: int) -> str:
    return str(int(x))


def vec_str(v) -> list[str]:
    return [int_str(a) for a in v]


def parse_int(x) -> int:
    if isinstance(x, bool):
        raise ValueError("expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x, 10)
    raise ValueError(f"expected an integer or decimal string, got {x!r}")


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/", 1)
            return Fraction(int(num, 10), int(den, 10))
        return Fraction(int(x, 10))
    raise ValueError(f"expected a rational 'p/q' string, got {x!r}")


# --- polytopes -------------------------------------------------------------------

def polytope_to_json(P: LatticePolytope) -> dict:
    return {
        "dim": P.ambient_dim,
        "vertices": [vec_str(v) for v in P.vertices],
    }


def polytope_from_json(obj) -> LatticePolytope:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ValueError("polytope JSON needs a 'vertices' field")
    verts = [tuple(parse_int(a) for a in v) for v in obj["vertices"]]
    if not verts:
        raise ValueError("polytope JSON has no vertices")
    if "dim" in obj and parse_int(obj["dim"]) != len(verts[0]):
        raise ValueError("'dim' disagrees with vertex coordinates")
    return convex_hull(verts)


def hrep_to_json(P: LatticePolytope) -> dict:
    return {
        "normals": [vec_str(n) for n, _ in P.facets],
        "offsets": [int_str(b) for _, b in P.facets],
        "equations": [
            {"normal": vec_str(a), "value": int_str(v)} for a, v in P.equations
        ],
    }


def rational_polytope_to_json(P: RationalPolytope) -> dict:
    return {
        "dim": P.ambient_dim,
        "vertices": [[rat_str(a) for a in v] for v in P.vertices],
    }


def rational_polytope_from_json(obj) -> RationalPolytope:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ValueError("polytope JSON needs a 'vertices' field")
    verts = [tuple(parse_rat(a) for a in v) for v in obj["vertices"]]
    if not verts:
        raise ValueError("polytope JSON has no vertices")
    return rational_hull(verts)


# --- cones ------------------------------------------------------------------------

def cone_to_json(C: RationalCone) -> dict:
    return {"generators": [vec_str(g) for g in C.rays]}


def cone_from_json(obj) -> RationalCone:
    if not isinstance(obj, dict) or "generators" not in obj:
        raise ValueError("cone JSON needs a 'generators' field")
    gens = [tuple(parse_int(a) for a in g) for g in obj["generators"]]
    if not gens:
        raise ValueError("cone JSON has no generators")
    return cone(gens)


# --- reports -----------------------------------------------------------------------

def witness_json(witness):
    if witness is None:
        return None
    c, z = witness
    return {"c": int_str(c), "z": vec_str(z)}


def normality_report_json(report) -> dict:
    return {
        "integrally_closed": report.integrally_closed,
        "normal_wrt_lambda": report.normal_wrt_lambda,
        "witness": witness_json(report.witness),
    }


def icp_check_json(check) -> dict:
    return {
        "r": int_str(check.r),
        "c_max": int_str(check.c_max),
        "holds": check.holds,
        "witness": witness_json(check.witness),
    }


def cr_certificate_json(cert) -> dict:
    r, c_max, holds = cert.upper_bound_checked
    return {
        "lower_bound": int_str(cert.lower_bound),
        "upper_bound_checked": {
            "r": int_str(r),
            "c_max": int_str(c_max),
            "holds": holds,
        },
        "witness": witness_json(cert.witness),
        "envelope": [int_str(cert.envelope[0]), int_str(cert.envelope[1])],
    }


def jump_json(jump) -> dict:
    return {
        "point": vec_str(jump.point),
        "height": int_str(jump.height),
        "volume": int_str(jump.volume),
        "target_vertices": [vec_str(v) for v in jump.target.vertices],
    }


def bit_provenance(src) -> dict:
    return {
        "origin": src.origin,
        "path": src.path,
        "sha256": src.sha256(),
        "cursor": int_str(src.cursor),
    }


def atlas_json(atlas) -> dict:
    return {
        "elements": [polytope_to_json(P) for P in atlas.elements],
        "hasse_edges": [[a, b] for a, b in atlas.hasse_edges],
        "betti": atlas.betti,
        "fingerprints": {
            repr(k): v for k, v in sorted(atlas.fingerprint_counts.items(), key=repr)
        },
    }


def survey_counts_json(stats) -> dict:
    per_cluster = {}
    for key, bucket in stats.per_cluster.items():
        per_cluster[str(key)] = dict(bucket)
    return {"counts": dict(stats.counts), "per_cluster": per_cluster}


def survey_csv(stats) -> str:
    lines = ["cluster,n,total,normal,minimal,maximal"]
    for idx, (key, bucket) in enumerate(sorted(
        stats.per_cluster.items(), key=lambda kv: (kv[0] is None, kv[0])
    )):
        n = "" if key is None else str(key)
        lines.append(
            f"{idx},{n},{bucket['total']},{bucket['normal']},"
            f"{bucket['minimal']},{bucket['maximal']}"
        )
    return "\n".join(lines) + "\n"
