import pytest

import mltt
from mltt import Term


def fun_ctx():
    nat_to_nat = Term.parse("Nat -> Nat")
    return [nat_to_nat], nat_to_nat


def test_parse_print_roundtrip():
    t = Term.parse(r"\x:Nat. succ x")
    assert t.tag == "Lam"
    assert str(t) == str(Term.parse(str(t)))
    assert Term.parse("f zero", ["f"]) == Term.parse("f zero", ["f"])
    with pytest.raises(ValueError):
        Term.parse("y")


@pytest.mark.parametrize("algo", ["typed", "untyped"])
def test_variable_is_convertible_to_itself(algo):
    ctx, ty = fun_ctx()
    x = Term.var(0)
    r = mltt.conv(ctx, ty, x, x, algo=algo)
    assert r and r.verdict == "Accept"
    assert r.fuel_used > 0


@pytest.mark.parametrize("algo", ["typed", "untyped"])
def test_eta(algo):
    ctx, ty = fun_ctx()
    eta = Term.parse(r"\y:Nat. f y", ["f"])
    assert mltt.conv(ctx, ty, Term.var(0), eta, algo=algo)


def test_distinct_numerals_rejected():
    r = mltt.conv([], Term.nat(), Term.numeral(1), Term.numeral(2))
    assert not r
    assert r.verdict == "Reject"
    assert r.path


def test_typing():
    a = Term.univ()
    ident = Term.parse(r"\x:A. x", ["A"])
    inferred = mltt.infer([a], ident)
    assert inferred.value == Term.parse("A -> A", ["A"])
    assert mltt.check([a], ident, inferred.value, algo="untyped")
    assert not mltt.check([], Term.zero(), Term.univ())
    with pytest.raises(ValueError):
        mltt.check([], Term.zero(), Term.nat(), algo="other")


def test_reduction_and_normalisation():
    two_plus_two = Term.parse("natrec (z. Nat) (succ (succ zero)) (z r. succ r) (succ (succ zero))")
    assert mltt.normalize([], Term.nat(), two_plus_two).value == Term.numeral(4)
    assert mltt.whnf(two_plus_two).value.tag == "Succ"
    omega = Term.parse(r"(\x:U. x x) (\x:U. x x)")
    r = mltt.whnf(omega, fuel=1000)
    assert r.verdict == "OutOfFuel"
    assert r.value is None


def test_run_query_lines():
    code, out, trace = mltt.run("conv (x : Nat -> Nat) |- x == x : Nat -> Nat", algo="untyped")
    assert (code, out) == (0, "Accept")
    assert trace == ["UTmRed", "  NeuNeu", "    UVar"]
    assert mltt.run(r"whnf |- (\x:U. x x) (\x:U. x x)")[:2] == (2, "OutOfFuel")
    assert mltt.run("check |- y : Nat")[0] == 3


def test_harness_runs():
    report = mltt.diff_run(50, seed=3)
    assert report["total"] == 50
    assert report["disagreements"] == []
    assert report["report"].splitlines()[-1].startswith("# summary ")
    assert "symmetry" in mltt.property_suites()
    props = mltt.property_run("symmetry", 20)
    assert props["total"] == 20 and props["failures"] == []
    with pytest.raises(ValueError):
        mltt.property_run("no-such-suite", 1)
    with pytest.raises(ValueError):
        mltt.diff_run(1, max_depth=0)


def test_validate_fixture_text():
    with pytest.raises(ValueError):
        mltt.validate("this is not a derivation")


def test_validate_derivation():
    text = """(NatTy (type |- Nat)
  (CtxEmpty (ctx |-)))

(NatTy (type |- U)
  (CtxEmpty (ctx |-)))
"""
    good, bad = mltt.validate(text)
    assert good and good.verdict == "Accept"
    assert not bad and bad.message
