"""Smoke test for the weilform extension module."""

import json

import weilform as wf


def check(report):
    failed = [(name, detail) for name, ok, detail in report if not ok]
    assert not failed, failed


x, y = wf.Poly("x", ["x", "y"]), wf.Poly("y", ["x", "y"])
assert str((x + wf.Poly("1", ["x", "y"])) * (x - wf.Poly("1", ["x", "y"]))) == str(wf.Poly("x^2 - 1", ["x", "y"]))
assert (x * x * y).partial(0) == wf.Poly("2*x*y", ["x", "y"])

assert sorted(wf.fixture_names()) == ["F0_so3", "F1_abelian_2d", "F2_semisimple_2d", "F3_foliation_4d"]
for name in wf.fixture_names():
    spec = wf.Spec.fixture(name)
    text = spec.to_json()
    assert wf.Spec.parse(text).to_json() == text
    check(spec.algebroid.validate())

spec = wf.Spec.fixture("F1_abelian_2d")
imc = spec.im_connection()
omega = imc.curvature()
assert (omega.level, omega.degree) == (1, 2)
assert imc.is_horizontal(omega)
check(imc.check_im(omega))
check(imc.bianchi())
assert imc.dhor(imc.cochain) == omega
assert imc.hstar(imc.cochain).is_zero()
tables = json.loads(omega.to_json())
assert (tables["p"], tables["q"]) == (1, 2)
assert tables["tables"]["0"]["1|"] == {"1": {"12": "1"}}

spec = wf.Spec.fixture("F2_semisimple_2d")
imc = spec.im_connection()
check(imc.coupling_checks())
for seed in range(5):
    c = imc.random_cochain(1, 1, seed)
    assert imc.delta(imc.delta(c)).is_zero()
    assert imc.delta(imc.dhor(c)) == imc.dhor(imc.delta(c))

try:
    wf.Spec.parse('{"chart": ')
except ValueError:
    pass
else:
    raise AssertionError("malformed spec accepted")

print("smoke test passed")
