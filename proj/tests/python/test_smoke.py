"""Smoke tests for the python bindings."""

import os
from fractions import Fraction

import pytest

import qconn

DATA = os.environ.get("QCONN_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_valuation_and_reduction():
    assert qconn.valuation("18", 3) == {"finite": True, "value": 2}
    assert qconn.valuation("0", 5) == {"finite": False}
    assert qconn.reduce_mod("1/2", 3, 2) == "5"
    assert qconn.factorial_valuation(81, 3) == 40
    with pytest.raises(qconn.QconnError):
        qconn.reduce_mod("1/3", 3, 1)


def test_reference_series():
    h21 = qconn.reference_fractions("cp1_H21", 4)
    assert h21 == [1, 0, Fraction(1, 32), 0, Fraction(27, 2048)]
    e12 = qconn.reference_fractions("blowup_E12", 3)
    assert e12 == [1, -1, 2, -6]


def test_series_certificates():
    h21 = qconn.reference_series("cp1_H21", 200)
    cert = qconn.check_log_decay(h21, 3, "1", "1")
    assert cert["pass"]
    assert qconn.mod_p_reduction_degree(h21, 3) == 2
    np = qconn.newton_polygon(h21, 3)
    assert np["hull"][0] == (0, 0)
    assert qconn.slope_floor(h21, 3, "1/2", "4")["pass"]


def test_block_split_cp1():
    built = qconn.build_connection_file(os.path.join(DATA, "cp1.ring"), 0)
    assert built["convention"] == "minus"
    res = qconn.block_split(built["coeffs"], "minus", 3, 12)
    eigs = [e["eigenvalue"] for e in res["eigenvalues"]]
    assert set(eigs) == {"2", "-2"}
    # H = E_{+2} - E_{-2}; its (2,1) entry at tau^2 is 1/64 - (-1/64) = 1/32
    proj = {e["eigenvalue"]: p for e, p in zip(res["eigenvalues"], res["projectors"])}
    plus_k2 = Fraction(proj["2"][2][1][0])
    minus_k2 = Fraction(proj["-2"][2][1][0])
    assert plus_k2 - minus_k2 == Fraction(1, 32)
    assert all(d["unit"] for d in res["differences"])


def test_split_file_blowup():
    res = qconn.split_file(os.path.join(DATA, "blowup.conn"), 3, 10)
    proj = {e["eigenvalue"]: p for e, p in zip(res["eigenvalues"], res["projectors"])}
    e = proj["-1"]
    # E[2,1] = sum (-1)^j j! tau^j in the transposed (row) convention
    got = [Fraction(e[k][1][0]) for k in range(6)]
    assert got == [1, -1, 2, -6, 24, -120]


def test_extend_obstruction():
    coeffs = [
        [["0", "0"], ["0", "0"]],
        [["-1", "0"], ["0", "0"]],
        [["0", "1"], ["0", "0"]],
    ]
    res = qconn.extend_endomorphism(coeffs, "plus", [["1", "0"], ["0", "0"]], 10)
    assert res["status"] == "obstructed"
    assert res["order"] == 1
    assert Fraction(res["obstruction"][0][1]) != 0


def test_extend_non_unique():
    coeffs = [
        [["0"] * 4 for _ in range(4)],
        [["0"] * 4 for _ in range(3)] + [["0", "0", "0", "-1"]],
    ]
    e0 = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "0"], ["0", "0", "0", "0"]]
    res = qconn.extend_endomorphism(coeffs, "plus", e0, 10)
    assert res["status"] == "non_unique"
    assert res["kernel_dim"] == 3


def test_covariant_derivative_of_identity():
    coeffs = [[["1", "2"], ["3", "4"]], [["0", "1"], ["1", "0"]]]
    ident = [[["1", "0"], ["0", "1"]] for _ in range(5)]
    ident[1] = [["0", "0"], ["0", "0"]]
    ident[2] = [["0", "0"], ["0", "0"]]
    ident[3] = [["0", "0"], ["0", "0"]]
    ident[4] = [["0", "0"], ["0", "0"]]
    der = qconn.covariant_derivative(coeffs, "plus", ident)
    assert all(x == "0" for mat in der for row in mat for x in row)


def test_bgamma():
    mods = qconn.bgamma_cohomology(3, 2, 5)
    assert mods[0]["free_rank"] == 1
    assert mods[2]["torsion_exponents"] == [2]
    assert mods[2]["text"] == "Z/9"
    assert mods[3]["text"] == "0"
    assert qconn.theta_squared(2, 1) == "t^1"


def test_diag_class():
    good, total = qconn.diag_class_trials(os.path.join(DATA, "twostep.cplx"), 2, 1, trials=8, seed=3)
    assert (good, total) == (8, 8)


def test_ring_summary():
    d = qconn.ring_summary(os.path.join(DATA, "cp1.ring"))
    assert d["labels"] == ["one", "h"]
    assert d["unit"] == "one"
    assert d["dim_c"] == 1


def test_equivariant_cohomology_file():
    mods = qconn.equivariant_cohomology_file(os.path.join(DATA, "twostep.cplx"), 2, 1, 0, 4)
    # the complex sits in degrees 1 and 2 with trivial action; degree-0 slot empty
    assert mods[0]["text"] == "0"
    assert len(mods) == 5
