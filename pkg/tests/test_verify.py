import itertools
import random
from fractions import Fraction

import pytest

from helpers import build_corpus, mutate_certificate

from ipscert.circuit import (
    cadd,
    cconst,
    cmul,
    cscale,
    cvar,
    eval_circuit,
    expand,
    normalize_layered,
)
from ipscert.gadget import gadgetize
from ipscert.poly import SparsePoly, Var
from ipscert.refute import assemble_refutation
from ipscert.verify import (
    DEFAULT_PIT_PRIME,
    PitConfig,
    boolean_image,
    boolean_image_poly,
    is_probable_prime,
    verify_exact,
    verify_pit,
)

X1, X2 = Var("x", 1), Var("x", 2)


def leaf_certificate():
    from ipscert.gadget import GadgetLedger

    return assemble_refutation(cvar(X1), GadgetLedger(()))


def test_default_prime_is_a_62_bit_prime():
    assert DEFAULT_PIT_PRIME == 2 ** 62 - 57
    assert DEFAULT_PIT_PRIME > 2 ** 61
    assert is_probable_prime(DEFAULT_PIT_PRIME)


def test_pit_config_validation():
    with pytest.raises(ValueError, match="not prime"):
        PitConfig(prime=2 ** 61)
    with pytest.raises(ValueError, match="prime 2"):
        PitConfig(prime=2)
    with pytest.raises(ValueError, match="trials"):
        PitConfig(trials=0)


def test_verify_exact_hand_example():
    cert = leaf_certificate()
    report = verify_exact(cert.axioms, cert.cofactors)
    assert report.verdict == "verified-exact"
    assert report.ok and report.exit_code() == 0


def test_verify_exact_flipped_sign_refuted_with_witness():
    cert = leaf_certificate()
    cofactors = list(cert.cofactors)
    cofactors[1] = cscale(-1, cofactors[1])
    report = verify_exact(cert.axioms, cofactors)
    assert report.verdict == "refuted"
    assert report.witness is not None
    residual = SparsePoly.zero() - 1
    for (_, ax), cf in zip(cert.axioms, cofactors):
        axp = ax if isinstance(ax, SparsePoly) else expand(ax)
        residual = residual + expand(cf) * axp
    assert residual.evaluate(report.witness) != 0


def test_verify_exact_trivial_certificate():
    axioms = (("one", SparsePoly.constant(1)),)
    cofactors = (cconst(1),)
    assert verify_exact(axioms, cofactors).verdict == "verified-exact"


def test_verify_exact_rejects_placeholder_use():
    axioms = (("one", SparsePoly.constant(1)),)
    cofactors = (cadd(cconst(1), cvar(Var("fresh", 1))),)
    report = verify_exact(axioms, cofactors)
    assert report.verdict == "error"
    assert "placeholder" in report.detail


def test_verify_exact_length_mismatch():
    assert verify_exact((), (cconst(1),)).verdict == "error"


def test_pit_accepts_valid_certificate_many_seeds():
    cert = leaf_certificate()
    for seed in range(100):
        cfg = PitConfig(trials=5, seed=seed)
        assert verify_pit(cert.axioms, cert.cofactors, cfg).verdict == "verified-probabilistic"


def test_pit_determinism():
    cert = leaf_certificate()
    cfg = PitConfig(trials=7, seed=42)
    r1 = verify_pit(cert.axioms, cert.cofactors, cfg)
    r2 = verify_pit(cert.axioms, cert.cofactors, cfg)
    assert r1.to_jsonable() == r2.to_jsonable()


def test_pit_rejects_mutations():
    rng = random.Random(5)
    base = build_corpus(551, 3)
    certs = []
    for c in base:
        cp, ledger = gadgetize(normalize_layered(c))
        certs.append(assemble_refutation(cp, ledger))
    for i in range(30):
        cert = certs[i % len(certs)]
        mutated = mutate_certificate(rng, cert, seed=i)
        cfg = PitConfig(trials=20, seed=i)
        report = verify_pit(mutated.axioms, mutated.cofactors, cfg)
        assert report.verdict == "refuted"
        assert report.witness is not None


def test_pit_denominator_divisible_by_prime():
    axioms = (("f", SparsePoly.constant(Fraction(1, 3))),)
    cofactors = (cconst(3),)
    report = verify_pit(axioms, cofactors, PitConfig(prime=3, trials=1))
    assert report.verdict == "error"
    assert "denominator" in report.detail and "3" in report.detail


def test_verify_invariant_under_restructuring():
    c = cadd(cvar(X1), cmul(cvar(X2), cvar(X1)))
    cp, ledger = gadgetize(normalize_layered(c))
    cert = assemble_refutation(cp, ledger)
    restructured = tuple(normalize_layered(cf) for cf in cert.cofactors)
    assert verify_exact(cert.axioms, restructured).verdict == "verified-exact"


def test_boolean_image_product():
    report = boolean_image(cmul(cvar(X1), cvar(X2)))
    assert report.exhaustive
    assert report.values == frozenset((Fraction(0), Fraction(1)))


def test_boolean_image_matches_pointwise_oracle():
    rng = random.Random(61)
    from helpers import random_dag_circuit

    for _ in range(15):
        c = random_dag_circuit(rng, n_gates=rng.randint(6, 18))
        report = boolean_image(c)
        assert report.exhaustive
        vars_ = c.variables()
        oracle = set()
        for bits in itertools.product((0, 1), repeat=len(vars_)):
            oracle.add(eval_circuit(c, dict(zip(vars_, bits))))
        assert report.values == frozenset(oracle)


def test_boolean_image_poly_oracle_agreement():
    p = SparsePoly.variable(X1) * 2 - SparsePoly.variable(X2)
    assert boolean_image_poly(p) == frozenset(
        (Fraction(0), Fraction(2), Fraction(-1), Fraction(1)))


def test_boolean_image_sampling_mode():
    vars_ = [Var("x", i) for i in range(1, 20)]
    parts = [cvar(v) for v in vars_]
    c = cadd(*parts)
    report = boolean_image(c, exhaustive_limit=10, samples=500, seed=1)
    assert not report.exhaustive
    assert report.points == 500
    assert all(0 <= v <= 19 for v in report.values)
    again = boolean_image(c, exhaustive_limit=10, samples=500, seed=1)
    assert report.values == again.values


def test_boolean_image_containment_verdict():
    report = boolean_image(cmul(cvar(X1), cvar(X2)), target=frozenset((0, 1)))
    assert report.contained is True
    report = boolean_image(cadd(cvar(X1), cvar(X2)), target=frozenset((0, 1)))
    assert report.contained is False
