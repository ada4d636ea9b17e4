"""Dirichlet character tests: group structure, conductors, character sums."""

import cmath
import math

import numpy as np
import pytest

from koblitz.characters import characters, rho_chi
from koblitz.errors import CapacityError, DomainError
from koblitz.primes import moebius, phi
from koblitz.twinseries import rho


def _oracle_conductor(chi):
    """Smallest divisor d of q with chi trivial on units congruent to 1 mod d."""
    q = chi.modulus
    for d in range(1, q + 1):
        if q % d:
            continue
        if all(
            abs(chi.values[a] - 1.0) < 1e-9
            for a in range(q)
            if math.gcd(a, q) == 1 and a % d == 1 % d
        ):
            return d
    raise AssertionError("no conductor found")


class TestCharacterGroup:
    def test_q1(self):
        table = characters(1)
        assert table.phi == 1
        assert len(table.characters) == 1
        assert table.characters[0].is_principal
        assert table.characters[0](7) == 1

    def test_q5(self):
        table = characters(5)
        assert len(table.characters) == 4
        assert sum(chi.is_primitive for chi in table.characters) == 3

    def test_q8(self):
        table = characters(8)
        assert len(table.characters) == 4

    def test_counts_match_phi(self):
        for q in (2, 3, 4, 6, 9, 12, 16, 24, 36, 45, 60, 100, 101, 128):
            table = characters(q)
            assert len(table.characters) == phi(q) == table.phi

    def test_principal_is_unit_indicator(self):
        for q in (6, 8, 15, 45):
            chi0 = characters(q).principal
            for a in range(q):
                want = 1.0 if math.gcd(a, q) == 1 else 0.0
                assert chi0.values[a] == pytest.approx(want)

    def test_values_multiplicative(self):
        for q in (7, 12, 45):
            for chi in characters(q).characters:
                for a in range(q):
                    for b in range(q):
                        lhs = chi.values[a * b % q]
                        rhs = chi.values[a] * chi.values[b]
                        assert abs(lhs - rhs) < 1e-9

    def test_domain_and_capacity(self):
        with pytest.raises(DomainError):
            characters(0)
        with pytest.raises(CapacityError):
            characters(10**4 + 1)


class TestConductors:
    def test_against_brute_force(self):
        mods = list(range(1, 101)) + [101, 105, 112, 128, 144, 200]
        for q in mods:
            for chi in characters(q).characters:
                assert chi.conductor == _oracle_conductor(chi), (
                    q,
                    chi.exponents,
                )

    def test_primitive_flag(self):
        for q in (5, 8, 12, 45):
            for chi in characters(q).characters:
                assert chi.is_primitive == (chi.conductor == q)


class TestOrthogonality:
    def test_row_orthogonality(self):
        for q in (3, 4, 8, 15, 45, 101):
            table = characters(q)
            vals = np.array([chi.values for chi in table.characters])
            gram = vals @ vals.conj().T
            assert np.abs(gram - table.phi * np.eye(table.phi)).max() < 1e-9

    def test_column_sum(self):
        # sum over chi of chi(a) = phi(q) iff a = 1
        for q in (5, 12, 36):
            table = characters(q)
            for a in range(q):
                s = sum(chi.values[a] for chi in table.characters)
                want = table.phi if a % q == 1 % q else 0.0
                assert abs(s - want) < 1e-9


class TestRhoChi:
    def test_principal_reduces_to_rho(self):
        for q in (3, 4, 15, 45):
            chi0 = characters(q).principal
            for r in range(-6, 7):
                assert rho_chi(r, chi0) == pytest.approx(rho(r, q), abs=1e-9)

    def test_primitive_identity_mod5(self):
        for chi in characters(5).characters:
            if not chi.is_primitive:
                continue
            got = rho_chi(2, chi)
            want = moebius(5) * chi.values[2]
            assert abs(got - want) < 1e-10

    def test_definition_unrolled(self):
        q = 12
        for chi in characters(q).characters:
            for r in (0, 5):
                want = sum(
                    chi.values[b]
                    for b in range(q)
                    if math.gcd(b - r, q) == 1
                )
                assert abs(rho_chi(r, chi) - want) < 1e-10
