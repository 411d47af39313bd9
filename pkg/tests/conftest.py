import sys

import pytest

from gspmixdom.expr import parse_expr

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

K2 = "e(a,b)"
P3 = "s(e(a,b),e(b,c))"
TRIANGLE = "p(s(e(a,b),e(b,c)),e(a,c))"


@pytest.fixture
def k2():
    return parse_expr(K2)


@pytest.fixture
def p3():
    return parse_expr(P3)


@pytest.fixture
def triangle():
    return parse_expr(TRIANGLE)
