import pytest

from twoterm.config import ConfigError, parse_config, parse_int_list, with_overrides
from twoterm.core import PotentialSpec, manning_rosen_spec

BASE = """
[potential]
V0 = 1
V1 = 0.5
beta = 0.2
"""


def test_defaults():
    cfg = parse_config(BASE)
    assert cfg.spec() == PotentialSpec(1.0, 0.5, 0.2, 1.0, 1.0)
    assert cfg.equation == "kg" and cfg.n_values == (0,) and cfg.angular_values == (0,)
    assert cfg.output_format == "json" and cfg.output_path == "-"


def test_int_lists():
    assert parse_int_list("0..2, 5") == (0, 1, 2, 5)
    assert parse_int_list("-1, 2") == (-1, 2)
    assert parse_int_list("") == ()
    with pytest.raises(ValueError):
        parse_int_list("3..1")


def test_pair_order_is_n_major():
    cfg = parse_config(BASE + "[quantum]\nn = 0..1\nell = 0, 1\n")
    assert cfg.pairs() == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_special_potential_blocks():
    cfg = parse_config("[manning_rosen]\nA = 2\nalpha = 1.5\nb = 5\n")
    assert cfg.spec() == manning_rosen_spec(2, 1.5, 5)
    assert parse_config("[coulomb]\nzeta = 0.5\nbeta = 0.01\n").spec().V0 == pytest.approx(0.005)
    assert parse_config("[hulthen]\nV0 = 1\nbeta = 0.1\n").spec().V1 == 0


@pytest.mark.parametrize(
    "text,needle",
    [
        ("", "exactly one potential section"),
        (BASE + "[hulthen]\nV0 = 1\nbeta = 1\n", "exactly one potential section"),
        ("[potential]\nV0 = 1\nV1 = 0\n", "[potential] beta"),
        ("[potential]\nV0 = 1\nV1 = 0\nbeta = fast\n", "[potential] beta (line 4)"),
        (BASE + "[quantum]\nn =\n", "[quantum] n (line 7) is an empty range"),
        (BASE + "[quantum]\nequation = schroedinger\n", "[quantum] equation"),
        (BASE + "[quantum]\nequation = dirac\nkappa = 0, 1\n", "kappa"),
        (BASE + "[quantum]\nequation = kg\nkappa = 1\n", "kappa"),
        (BASE + "[solver]\ngrid = 8\n", "[solver]"),
        (BASE + "[solver]\ntol = -1\n", "[solver]"),
        (BASE + "[output]\nformat = xml\n", "[output] format"),
        (BASE + "[potential_extra]\nx = 1\n", "unknown section"),
        (BASE + "[quantum]\nm = 1\n", "unknown field [quantum] m"),
        (BASE + "[sweep]\nparam = zeta\nvalues = 1\n", "[sweep] param"),
        (BASE + "[sweep]\nparam = beta\nvalues =\n", "[sweep] values"),
        ("[potential]\nV0 = 1\nV1 = 0\nbeta = -1\n", "beta must be positive"),
        ("[potential\nV0 = 1\n", "syntax error"),
    ],
)
def test_errors_name_the_field(text, needle):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert needle in str(info.value)


def test_flag_overrides():
    cfg = parse_config(BASE + "[quantum]\nell = 1, 2\n")
    out = with_overrides(cfg, equation="dirac", tol=1e-10, fmt="csv", out="x.csv")
    assert out.equation == "dirac" and out.solver.tol == 1e-10
    assert out.output_format == "csv" and out.output_path == "x.csv"
    with pytest.raises(ConfigError):
        with_overrides(parse_config(BASE), equation="dirac")
    with pytest.raises(ConfigError):
        with_overrides(cfg, tol=0.0)


def test_wavefunction_grid():
    cfg = parse_config(BASE + "[wavefunction]\nr_min = 1\nr_max = 2\npoints = 1\n")
    assert cfg.wavefunction.radii().tolist() == [1.0]
    with pytest.raises(ConfigError):
        parse_config(BASE + "[wavefunction]\npoints = 0\n")
