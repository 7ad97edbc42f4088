import os
import tempfile

import pytest

import rop


def test_schedule_landmarks():
    s = rop.Schedule.build()
    assert s.n_max == 2
    assert s.a(1) == 16
    assert s.step(1)["nu"] == 4112
    assert s.horizon == 141839164309504
    assert "variant = th2" in rop.config()


def test_indices_past_64_bits():
    s = rop.Schedule.build(variant="th1")
    assert s.horizon > 2**64
    assert s.step(3)["a"] == 2269426494210048


def test_basis_round_trip_and_norm():
    b = rop.Basis(rop.Schedule.build())
    f = b.e_in_f(16)
    assert f[0] == pytest.approx(1.0)
    assert f[16] == pytest.approx(0.25)
    assert b.f_to_e(f) == {16: 1.0}
    assert b.norm({0: "1/2", 3: -1}) > 0
    assert b.apply_T({0: 1}) == b.e_in_f(1)


def test_checks_and_errors():
    b = rop.Basis(rop.Schedule.build())
    rs = rop.run_checks(b, ["b-damping", "prop3"], steps=1)
    assert [r["id"] for r in rs] == ["b_damping.1", "prop3.1"]
    assert all(r["pass"] for r in rs)
    with pytest.raises(rop.RopError):
        rop.run_checks(b, ["nope"])


def test_demo_and_orbit():
    d = rop.demo_p3({0: 1, 3: "1/8"}, n=1, config="n_max = 1")
    assert d["report"]["pass"]
    assert d["dist"] < d["bound"]
    b = rop.Basis(rop.Schedule.build())
    c, dist = rop.orbit_distance(b, {0: 1}, b.e_in_f(5), 5)
    # the target went through doubles
    assert c == 5 and dist < 1e-12


def test_factorize_below_the_fan():
    b = rop.Basis(rop.Schedule.build(config="p = 2"))
    res = rop.factorize(b, 4200)
    assert 0 in res["jtilde"]
    assert all(r["pass"] for r in res["reports"]), [r["line"] for r in res["reports"]]


def test_hilbert():
    assert all(r["pass"] for r in rop.hilbert_checks("1/2"))


def test_run_matches_cli_codes():
    with tempfile.TemporaryDirectory() as d:
        code, out, _ = rop.run("build", out=d)
        assert code == 0 and "horizon" in out
        assert os.path.exists(os.path.join(d, "schedule.txt"))
    code, _, err = rop.run("build", schedule="/missing.txt")
    assert code == 2 and "not found" in err
