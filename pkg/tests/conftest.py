import sympy
from gmpy2 import mpq
from hypothesis import settings, strategies as st

from cremona_lab.algebra import MPoly

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

XY = ("x", "y")

small_q = st.builds(mpq, st.integers(-6, 6), st.integers(1, 4))
nonzero_q = small_q.filter(bool)


def polys(vars=XY, max_deg=3, max_terms=5):
    n = len(vars)
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    return st.dictionaries(exps, nonzero_q, max_size=max_terms).map(lambda t: MPoly(vars, t))


def nonzero_polys(vars=XY, max_deg=3, max_terms=5):
    return polys(vars, max_deg, max_terms).filter(lambda p: not p.is_zero())


def to_sympy(p: MPoly):
    syms = sympy.symbols(p.vars)
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(syms, exp):
            term *= s**e
        expr += term
    return expr


def from_sympy(expr, vars) -> MPoly:
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(vars), domain="QQ")
    return MPoly(vars, {e: mpq(int(c.p), int(c.q)) for e, c in poly.terms()})


# filled by test_acceptance.py, one (criterion, name, passed, seconds) per run
ACCEPTANCE: list[tuple[int, str, bool, float]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident, name, ok, secs in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {ident} {name}: {'PASS' if ok else 'FAIL'} ({secs:.1f} s)")
