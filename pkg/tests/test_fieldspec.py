import itertools
import math

import numpy as np
import pytest

from cubicsums import fieldspec as fs


def disc_closed_form(c0, c1, c2):
    # independent oracle for the resultant-based implementation
    return (
        18 * c2 * c1 * c0
        - 4 * c2**3 * c0
        + c2**2 * c1**2
        - 4 * c1**3
        - 27 * c0**2
    )


class TestDiscriminant:
    @pytest.mark.parametrize(
        "coeffs",
        [(-2, 0, 0), (-1, -2, 1), (8, -2, 1), (2, -1, 3), (-7, 5, -4), (1, 1, 1)],
    )
    def test_matches_closed_form(self, coeffs):
        c0, c1, c2 = coeffs
        assert fs.discriminant_monic_cubic(c0, c1, c2) == disc_closed_form(c0, c1, c2)

    def test_preset_values(self, field_nn2, field_c7):
        assert (field_nn2.disc, field_nn2.disc_sqfree_part, field_nn2.conductor_f) == (-108, -3, 6)
        assert not field_nn2.normal
        assert field_nn2.complex_places == 1
        assert (field_c7.disc, field_c7.disc_sqfree_part, field_c7.conductor_f) == (49, 1, 7)
        assert field_c7.normal
        assert field_c7.complex_places == 0

    def test_squarefree_decompose(self):
        assert fs.squarefree_decompose(-108) == (-3, 6)
        assert fs.squarefree_decompose(49) == (1, 7)
        assert fs.squarefree_decompose(1) == (1, 1)
        assert fs.squarefree_decompose(-8) == (-2, 2)


class TestParsing:
    def test_reducible_rejected(self):
        with pytest.raises(fs.FieldConfigError, match="reducible"):
            fs.parse_field_spec("name=x\npoly=-1, 0, 0")  # x^3 - 1

    def test_zero_constant_reducible(self):
        with pytest.raises(fs.FieldConfigError, match="reducible"):
            fs.parse_field_spec("poly = 0, 1, 0")

    def test_basic_document(self):
        f = fs.parse_field_spec("name = pure-5\npoly = -5, 0, 0  # x^3 - 5\n")
        assert f.poly == (-5, 0, 0)
        assert f.disc == -675

    def test_disc_must_divide_square(self):
        with pytest.raises(fs.FieldConfigError, match="square"):
            fs.parse_field_spec("poly=-2,0,0\ndisc=-54")

    def test_unknown_key(self):
        with pytest.raises(fs.FieldConfigError, match="unknown key"):
            fs.parse_field_spec("poly=-2,0,0\nfoo=1")

    def test_index_divisor_needs_override(self):
        # x^3 + x^2 - 2x + 8: the prime 2 always divides the index
        with pytest.raises(fs.FieldConfigError, match="override for p=2"):
            fs.parse_field_spec("poly = 8, -2, 1")

    def test_override_accepted_and_used(self):
        f = fs.parse_field_spec("poly = 8, -2, 1\noverride.2 = 1:1+1:1+1:1")
        st = fs.splitting_type(f, 2)
        assert st.components == ((1, 1), (1, 1), (1, 1))
        assert fs.local_aK(f, 2, 2) == [1, 3, 6]

    def test_monogenic_square_disc_prime_no_override(self):
        # x^3 - x - 2 has disc -104 = -26*4 but stays 2-maximal
        f = fs.parse_field_spec("poly = -2, -1, 0")
        assert f.poly_disc == -104
        assert 2 not in f.index_divisor_overrides

    def test_presets_by_name(self):
        assert fs.load_field("cubic-cyclic-7").name == "cubic-cyclic-7"
        with pytest.raises(fs.FieldConfigError):
            fs.load_field("no-such-preset")

    def test_load_inline_text(self):
        f = fs.load_field("poly=-2,0,0")
        assert f.disc == -108


class TestSplitting:
    def test_nn2_examples(self, field_nn2):
        assert fs.splitting_type(field_nn2, 2).pattern == "P1^3"
        assert fs.splitting_type(field_nn2, 5).pattern == "P1*P2"
        assert fs.splitting_type(field_nn2, 7).pattern == "P3"

    def test_c7_split_at_13(self, field_c7):
        st = fs.splitting_type(field_c7, 13)
        assert st.pattern == "P1*P1'*P1''"
        assert st.degree == 3

    def test_not_prime_rejected(self, field_nn2):
        with pytest.raises(fs.FieldConfigError, match="not prime"):
            fs.splitting_type(field_nn2, 10)

    def test_components_sum_to_degree(self, field_nn2, field_c7, field_hook):
        for f in (field_nn2, field_c7):
            for p in (2, 3, 5, 7, 11, 13, 101):
                assert fs.splitting_type(f, p).degree == 3
        assert fs.splitting_type(field_hook, 11).degree == 1

    def test_degree_one_components_match_roots(self, field_nn2, field_c7):
        # exhaustive check p <= 1e4, p not dividing the discriminant
        for f in (field_nn2, field_c7):
            c0, c1, c2 = f.poly
            for p in fs.primes_upto(10**4).tolist():
                if f.poly_disc % p == 0:
                    continue
                st = fs.splitting_type(f, p)
                assert st.n_degree_one() == len(fs.roots_mod_p(c0, c1, c2, p)), (f.name, p)

    def test_bulk_matches_scalar(self, field_nn2, field_c7, field_hook):
        for f in (field_nn2, field_c7, field_hook):
            ps, codes = fs.splitting_codes(f, 3000)
            for p, c in zip(ps.tolist(), codes.tolist()):
                st = fs.splitting_type(f, int(p))
                assert st.components == fs._COMPONENTS[c], (f.name, p)

    def test_scalar_python_ladder_matches_vector(self, field_nn2):
        c0, c1, c2 = field_nn2.poly
        ps = fs.primes_upto(3000)
        vec = fs._count_roots_vector(c0, c1, c2, ps)
        for p, want in zip(ps.tolist(), vec.tolist()):
            assert fs._count_roots_py(c0, c1, c2, int(p)) == want

    def test_large_prime_smoke(self, field_nn2):
        st = fs.splitting_type(field_nn2, 2**31 + 11)  # prime above the vector range
        assert st.degree == 3

    def test_normal_preset_prime_counts(self, field_c7, tables_c7_small):
        # in a normal cubic field an unramified prime is split or inert,
        # so a_K(p) is 3 exactly when the cubic has 3 roots mod p, else 0
        c0, c1, c2 = field_c7.poly
        for p in fs.primes_upto(500).tolist():
            if field_c7.poly_disc % p == 0:
                continue
            nroots = len(fs.roots_mod_p(c0, c1, c2, p))
            aKp = fs.local_aK(field_c7, p, 1)[1]
            assert aKp in (0, 3)
            assert (aKp == 3) == (nroots == 3)


class TestLocalCounts:
    @staticmethod
    def brute_counts(f_shape, kmax):
        # enumerate exponent tuples directly
        out = [0] * (kmax + 1)
        ranges = [range(kmax // f + 1) for f in f_shape]
        for xs in itertools.product(*ranges):
            k = sum(f * x for f, x in zip(f_shape, xs))
            if k <= kmax:
                out[k] += 1
        return out

    @pytest.mark.parametrize("shape", [(1, 1, 1), (1, 2), (3,), (1, 1), (1,)])
    def test_against_enumeration(self, shape):
        assert fs.local_ideal_counts(shape, 9) == self.brute_counts(shape, 9)

    def test_spec_values(self):
        assert fs.local_ideal_counts((1, 1, 1), 1)[1] == 3
        assert fs.local_ideal_counts((1, 2), 2)[2] == 2
        assert fs.local_ideal_counts((1,), 2)[2] == 1

    def test_generating_function(self):
        # coefficients of prod (1 - t^f)^{-1} via series multiplication
        shape = (1, 2)
        kmax = 12
        series = [1] + [0] * kmax
        for f in shape:
            geo = [1 if k % f == 0 else 0 for k in range(kmax + 1)]
            series = [
                sum(series[i] * geo[k - i] for i in range(k + 1)) for k in range(kmax + 1)
            ]
        assert fs.local_ideal_counts(shape, kmax) == series

    def test_kmax_negative(self, field_nn2):
        with pytest.raises(ValueError):
            fs.local_aK(field_nn2, 2, -1)
