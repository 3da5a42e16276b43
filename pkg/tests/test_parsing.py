from fractions import Fraction

import pytest

from chowbeta.exact_algebra import Polynomial
from chowbeta.parsing import SpecError, parse_m_range, parse_polynomial, parse_spec

CONIC = """
ring: [x0, x1, x2]
variety: ["x0*x2 - x1^2"]
subscheme: ["x1", "x2"]
"""


def test_conic_document():
    spec = parse_spec(CONIC)
    X = spec.variety_spec()
    assert len(X.ideal.generators) == 1
    assert spec.param("m_range") == (1, 8)
    assert spec.param("N") == 32
    assert spec.subscheme_spec().z_ideal.generators[0] == Polynomial.variable(3, 1)


def test_polynomial_syntax():
    p = parse_polynomial("3/2*x^2*y - (x - y)^2 + -y**2", ["x", "y"])
    expected = Polynomial(2, {(2, 1): Fraction(3, 2), (2, 0): -1, (1, 1): 2, (0, 2): -2})
    assert p == expected


def test_inhomogeneous_generator_names_the_generator():
    with pytest.raises(SpecError, match="x0 \\+ x1\\^2"):
        parse_spec('ring: [x0, x1]\nvariety: ["x0 + x1^2"]\n')


def test_empty_variety_is_projective_space():
    spec = parse_spec("ring: [x0, x1, x2]\nvariety: []\nsubscheme: [x0, x1]\n")
    assert spec.variety_spec().ideal.generators == ()


def test_bad_character_reports_column():
    with pytest.raises(SpecError) as e:
        parse_polynomial("x0 $ x1", ["x0", "x1"])
    assert e.value.column == 4


def test_unknown_variable():
    with pytest.raises(SpecError, match="unknown variable"):
        parse_spec('ring: [x, y]\nvariety: ["x*z"]\n')


def test_unknown_key_reports_line():
    with pytest.raises(SpecError) as e:
        parse_spec("ring: [x, y]\nvarieties: []\n")
    assert e.value.line == 2 and e.value.key == "varieties"


def test_malformed_yaml_reports_position():
    with pytest.raises(SpecError) as e:
        parse_spec("ring: [x, y\nvariety: []\n")
    assert e.value.line is not None


@pytest.mark.parametrize("params", ["{M: 0}", "{N: -3}", "{tol: 0}", "{m_range: 3..1}", "{m_range: abc}"])
def test_parameters_must_be_positive(params):
    with pytest.raises(SpecError):
        parse_spec(f"ring: [x, y]\nparams: {params}\n")


def test_m_range_forms():
    assert parse_m_range("2..7") == (2, 7)
    assert parse_m_range([1, 4]) == (1, 4)
