"""Built-in verification suite over the two worked examples.

Everything here is self-contained: the four-line triple-point arrangement
with its three one-parameter degenerations, and the five-line arrangement
with a doubled vanishing order, are embedded as data together with the
expected matrices (as canonical rendered strings).  Each check recomputes
one artifact from scratch and compares exactly; there is no tolerance.
"""

from __future__ import annotations

from .aomoto_kita import omega_general
from .arrangement import (
    Realization,
    Weights,
    betanbc_frames,
    compute_type,
    dense_edges,
    general_position_type,
)
from .exact import parse_path_poly, parse_rational
from .gauss_manin import (
    DegenerationPath,
    connection_for_path,
    multiplicities,
    relative_dep,
)
from .orlik_solomon import projection_matrix

TRIPLE_POINT_ROWS = [
    ["0", "1", "1"],
    ["0", "1", "0"],
    ["0", "1", "-1"],
    ["-1", "0", "1"],
]

# three degenerations of the triple-point arrangement: line 4 sweeping onto
# the triple point, lines 1 and 2 colliding, line 4 moving out to infinity
TRIPLE_POINT_PATHS = {
    "T1": (
        [
            ["0", "1", "1"],
            ["0", "1", "0"],
            ["0", "1", "-1"],
            ["-1", "1 - t", "-1 + 2*t"],
        ],
        "1",
    ),
    "T2": (
        [
            ["0", "1", "1"],
            ["0", "1", "1 - t"],
            ["0", "1", "-1"],
            ["-1", "0", "1"],
        ],
        "1",
    ),
    "T3": (
        [
            ["0", "1", "1"],
            ["0", "1", "0"],
            ["0", "1", "-1"],
            ["-t", "0", "1"],
        ],
        "1",
    ),
}

SELBERG_ROWS = [
    ["0", "1", "0"],
    ["-1", "1", "0"],
    ["0", "0", "1"],
    ["-1", "0", "1"],
    ["0", "1", "-1"],
]

# lines 3, 4, 5 collapse onto the horizontal axis as t -> 0
SELBERG_PATH_ROWS = [
    ["0", "1", "0"],
    ["-1", "1", "0"],
    ["0", "0", "1"],
    ["-t", "0", "1"],
    ["0", "t", "-1"],
]
SELBERG_WITNESS = "1"

EXPECTED = {
    "triple-point dep": ((1, 2, 3),),
    "triple-point betanbc": ((2, 4), (3, 4)),
    "general betanbc (n=4)": ((2, 3), (2, 4), (3, 4)),
    "triple-point dense edges": (
        (1,), (2,), (3,), (4,), (5,), (1, 2, 3),
    ),
    "projection triple-point": (
        ("(-l3)/(l1 + l2 + l3)", "(l2)/(l1 + l2 + l3)"),
        ("1", "0"),
        ("0", "1"),
    ),
    "omega-general 345": (
        ("0", "0", "-l2"),
        ("0", "0", "l2"),
        ("0", "0", "-l1 - l2"),
    ),
    "omega-general 125": (
        ("-l3", "-l3", "0"),
        ("-l4", "-l4", "0"),
        ("0", "0", "0"),
    ),
    "omega-general 124": (
        ("0", "0", "0"),
        ("l4", "l1 + l2 + l4", "l2"),
        ("0", "0", "0"),
    ),
    "omega-general 134": (
        ("0", "0", "0"),
        ("0", "0", "0"),
        ("-l4", "l3", "l1 + l3 + l4"),
    ),
    "omega-general 234": (
        ("l4", "-l3", "l2"),
        ("-l4", "l3", "-l2"),
        ("l4", "-l3", "l2"),
    ),
    "connection T1": (("0", "l2"), ("0", "-l1 - l2")),
    "connection T2": (("l1 + l2", "l2"), ("0", "0")),
    "connection T3": (
        ("l1 + l2 + l3 + l4", "0"),
        ("0", "l1 + l2 + l3 + l4"),
    ),
    "selberg dep": ((1, 2, 6), (1, 3, 5), (2, 4, 5), (3, 4, 6)),
    "selberg betanbc": ((2, 4), (2, 5)),
    "selberg dense edges": (
        (1,), (2,), (3,), (4,), (5,), (6,),
        (1, 2, 6), (1, 3, 5), (2, 4, 5), (3, 4, 6),
    ),
    "selberg projection": (
        ("-1", "-1"),
        ("1", "0"),
        ("0", "1"),
        ("0", "0"),
        (
            "(-l2*l5 + l3*l5)/(l1*l2 + l2*l3 + l2*l5)",
            "(-l2*l3 - l2*l5 - l3*l4)/(l1*l2 + l2*l3 + l2*l5)",
        ),
        ("(-l5)/(l2)", "(l4)/(l2)"),
    ),
    "selberg relative dep": (
        (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5),
        (3, 4, 5), (3, 5, 6), (4, 5, 6),
    ),
    "selberg multiplicities": (
        ((1, 3, 4), 1), ((1, 4, 5), 1), ((2, 3, 4), 1), ((2, 3, 5), 1),
        ((3, 4, 5), 2), ((3, 5, 6), 1), ((4, 5, 6), 1),
    ),
    "selberg connection": (
        ("l3 + l4 + l5", "0"),
        ("0", "l3 + l4 + l5"),
    ),
}


def _realization(rows) -> Realization:
    return Realization([[parse_rational(e) for e in row] for row in rows])


def _path_realization(rows) -> Realization:
    return Realization([[parse_path_poly(e) for e in row] for row in rows])


def render_scalar(x) -> str:
    return x.render() if hasattr(x, "render") else str(x)


def _rendered(entries):
    return tuple(tuple(render_scalar(e) for e in row) for row in entries)


class CheckResult:
    __slots__ = ("name", "ok", "detail")

    def __init__(self, name: str, ok: bool, detail: str = ""):
        self.name = name
        self.ok = ok
        self.detail = detail


def _compare(name: str, got) -> CheckResult:
    want = EXPECTED[name]
    if got == want:
        return CheckResult(name, True)
    return CheckResult(name, False, f"expected {want!r}, got {got!r}")


def run_checks() -> list[CheckResult]:
    """Recompute the full worked-example suite and compare to expectations."""
    out: list[CheckResult] = []

    r = _realization(TRIPLE_POINT_ROWS)
    T = compute_type(r)
    w4 = Weights.generic(4)
    out.append(_compare("triple-point dep", tuple(sorted(T.dep))))
    out.append(_compare("triple-point betanbc", betanbc_frames(T)))
    out.append(
        _compare("general betanbc (n=4)", betanbc_frames(general_position_type(4, 2)))
    )
    out.append(
        _compare(
            "triple-point dense edges",
            tuple(f.members for f in dense_edges(T)),
        )
    )
    out.append(_compare("projection triple-point", _rendered(projection_matrix(T, w4).entries)))

    for J, name in [
        ((3, 4, 5), "omega-general 345"),
        ((1, 2, 5), "omega-general 125"),
        ((1, 2, 4), "omega-general 124"),
        ((1, 3, 4), "omega-general 134"),
        ((2, 3, 4), "omega-general 234"),
    ]:
        out.append(_compare(name, _rendered(omega_general(J, 4, 2).entries)))

    for key in ("T1", "T2", "T3"):
        rows, witness = TRIPLE_POINT_PATHS[key]
        dp = DegenerationPath(_path_realization(rows), parse_rational(witness))
        if dp.T != T:
            out.append(
                CheckResult(
                    f"connection {key}", False,
                    f"path witness type is {sorted(dp.T.dep)}, expected {sorted(T.dep)}",
                )
            )
            continue
        omega, _ = connection_for_path(dp)
        out.append(_compare(f"connection {key}", _rendered(omega.entries)))

    s = _realization(SELBERG_ROWS)
    S = compute_type(s)
    w5 = Weights.generic(5)
    out.append(_compare("selberg dep", tuple(sorted(S.dep))))
    out.append(_compare("selberg betanbc", betanbc_frames(S)))
    out.append(
        _compare("selberg dense edges", tuple(f.members for f in dense_edges(S)))
    )
    out.append(_compare("selberg projection", _rendered(projection_matrix(S, w5).entries)))

    dp = DegenerationPath(_path_realization(SELBERG_PATH_ROWS), parse_rational(SELBERG_WITNESS))
    ok_types = dp.T == S
    out.append(
        CheckResult(
            "selberg path endpoints", ok_types,
            "" if ok_types else f"witness type {sorted(dp.T.dep)} differs from {sorted(S.dep)}",
        )
    )
    out.append(_compare("selberg relative dep", relative_dep(dp.T, dp.Tprime)))
    mult = multiplicities(dp)
    out.append(_compare("selberg multiplicities", mult.items))
    omega_s, _ = connection_for_path(dp)
    out.append(_compare("selberg connection", _rendered(omega_s.entries)))

    return out


def run_suite() -> tuple[bool, list[CheckResult]]:
    results = run_checks()
    return all(c.ok for c in results), results
