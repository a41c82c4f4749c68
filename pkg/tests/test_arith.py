import cmath
import math

import numpy as np
import pytest

from cubicsums import arith as ar
from cubicsums import fieldspec as fs

# a_K(1..10) for x^3 - 2, frozen from the ideal-enumeration oracle
# (2 = P^3 and 3 = P^3, so a(6) = a(2) a(3) = 1 and A_K(10) = 9)
NN2_FIRST10 = [1, 1, 1, 1, 1, 1, 0, 1, 1, 1]


class TestBuildTables:
    def test_first_values_nn2(self, field_nn2):
        t = ar.build_tables(field_nn2, 10)
        assert t.aK[1:].tolist() == NN2_FIRST10
        assert ar.partial_A(t, 10) == 9

    def test_mu_at_one(self, tables_nn2_small):
        assert tables_nn2_small.muK[1] == 1
        assert tables_nn2_small.b[1] == 1

    def test_b_at_primes_cyclic(self, field_c7, tables_c7_small):
        for p in (13, 29, 2, 3):
            assert tables_c7_small.b[p] == tables_c7_small.aK[p] - 1

    def test_restriction_bit_exact(self, field_nn2):
        big = ar.build_tables(field_nn2, 10**5)
        small = ar.build_tables(field_nn2, 10**4)
        for name in ("aK", "muK", "b", "A_prefix", "M_prefix"):
            assert np.array_equal(getattr(big, name)[: 10**4 + 1], getattr(small, name))

    def test_mu_dirichlet_inverse_oracle(self, tables_nn2_small, tables_c7_small):
        for t in (tables_nn2_small, tables_c7_small):
            aK = t.aK
            mu = [0, 1]
            for n in range(2, 2001):
                s = 0
                d = 2
                while d * d <= n:
                    if n % d == 0:
                        s += aK[d] * mu[n // d]
                        if d != n // d:
                            s += aK[n // d] * mu[d]
                    d += 1
                s += aK[n] * mu[1]  # d = n term (mu[n] excluded: aK[1] mu[n])
                mu.append(-s)
                assert t.muK[n] == mu[n], n

    def test_b_is_mobius_star_aK(self, tables_nn2_small):
        mu = ar.mobius_sieve(2000)
        t = tables_nn2_small
        for n in range(1, 2001):
            want = sum(mu[d] * t.aK[n // d] for d in range(1, n + 1) if n % d == 0)
            assert t.b[n] == want, n

    def test_multiplicativity_exhaustive(self, tables_nn2_small):
        t = tables_nn2_small
        N = t.N
        for m in range(2, N):
            if m * 2 > N:
                break
            for n in range(m + 1, N // m + 1):
                if math.gcd(m, n) == 1:
                    assert t.aK[m * n] == t.aK[m] * t.aK[n], (m, n)

    def test_budget_guard(self, field_nn2):
        with pytest.raises(ar.ArithError):
            ar.build_tables(field_nn2, 0)
        with pytest.raises(ar.ArithError):
            ar.build_tables(field_nn2, 10**8 + 1)

    def test_threaded_build_identical(self, field_nn2):
        a = ar.build_tables(field_nn2, 5000)
        b = ar.build_tables(field_nn2, 5000, threads=4)
        assert np.array_equal(a.aK, b.aK)
        assert np.array_equal(a.muK, b.muK)

    def test_tau_corollary_bound(self, tables_nn2_1m, tables_c7_1m):
        # a_K(n) <= tau(n)^2 with constant 1 for cubic fields
        tau = ar.tau_table(2, 10**6)
        for t in (tables_nn2_1m, tables_c7_1m):
            ratio = t.aK[1:].astype(np.float64) / tau[1:].astype(np.float64) ** 2
            c = float(ratio.max())
            assert c <= 1.0, f"implied constant {c} exceeds 1"

    def test_trivial_M_bound(self, tables_nn2_1m, tables_c7_1m):
        for t in (tables_nn2_1m, tables_c7_1m):
            x = np.arange(1, t.N + 1, dtype=np.float64)
            assert float(np.max(np.abs(t.M_prefix[1:]) / x)) <= 1.0


class TestPartials:
    def test_zero(self, tables_nn2_small):
        assert ar.partial_A(tables_nn2_small, 0) == 0
        assert ar.partial_M(tables_nn2_small, 0) == 0

    def test_out_of_range(self, tables_nn2_small):
        with pytest.raises(ar.ArithError):
            ar.partial_A(tables_nn2_small, tables_nn2_small.N + 1)
        with pytest.raises(ar.ArithError):
            ar.partial_M(tables_nn2_small, -1)

    def test_error_P(self, tables_nn2_small):
        rho = ar.RhoEstimate(value=0.8, stderr=0.0, method="series_b_over_m", B=1000)
        assert ar.error_P(tables_nn2_small, rho, 100) == ar.partial_A(tables_nn2_small, 100) - 80.0


class TestRho:
    def test_hook_exact(self, field_hook):
        t = ar.build_tables(field_hook, 10**4)
        for method in ("series_b_over_m", "regression_on_A"):
            est = ar.estimate_rho(field_hook, t, 10**4, method)
            assert est.value == pytest.approx(1.0, abs=1e-12)
            assert est.stderr <= 1e-12

    def test_B_too_small(self, field_nn2, tables_nn2_small):
        with pytest.raises(ar.ArithError, match="too small"):
            ar.estimate_rho(field_nn2, tables_nn2_small, 999)

    def test_methods_agree_presets(self, field_nn2, tables_nn2_1m, field_c7, tables_c7_1m):
        for f, t in ((field_nn2, tables_nn2_1m), (field_c7, tables_c7_1m)):
            ser = ar.estimate_rho(f, t, 10**6, "series_b_over_m")
            reg = ar.estimate_rho(f, t, 10**6, "regression_on_A")
            assert abs(ser.value - reg.value) <= 3 * math.hypot(ser.stderr, reg.stderr)
            assert abs(ser.value - reg.value) / ser.value < 1e-3

    def test_cyclic_rho_equals_L1_squared(self, field_c7, tables_c7_1m, rho_c7):
        L = ar.L1_cubic_character(7, 10**6)
        target = abs(L) ** 2
        assert rho_c7.value == pytest.approx(target, abs=max(3 * rho_c7.stderr, 1e-4))

    def test_positive_enforced(self):
        with pytest.raises(ar.ArithError):
            ar.RhoEstimate(value=-1.0, stderr=0.0, method="series_b_over_m", B=1000)


class TestClassicalRamanujan:
    def test_trivia(self):
        assert all(ar.classical_ramanujan(1, n) == 1 for n in range(1, 30))
        assert all(ar.classical_ramanujan(m, 1) == ar.mobius(m) for m in range(1, 30))
        assert ar.classical_ramanujan(6, 4) == -1

    def test_exponential_sum_oracle(self):
        for m in range(1, 61):
            for n in range(1, 61):
                z = sum(
                    cmath.exp(2j * math.pi * j * n / m)
                    for j in range(1, m + 1)
                    if math.gcd(j, m) == 1
                )
                assert abs(z.imag) < 1e-9
                assert round(z.real) == ar.classical_ramanujan(m, n), (m, n)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            ar.classical_ramanujan(0, 1)

    def test_mobius_sieve_matches(self):
        mu = ar.mobius_sieve(3000)
        for n in range(1, 3001):
            assert mu[n] == ar.mobius(n)


class TestTauSums:
    def test_small_example(self):
        assert ar.tau_power_sum(2, 1, 6) == 14
        assert ar.tau_power_sum(2, 1, 1) == 1

    @pytest.mark.parametrize("l,q", [(2, 1), (3, 2), (4, 2)])
    def test_brute_oracle(self, l, q):
        def tau_l(n):
            # number of ordered factorizations into l parts, recursively
            if l == 2:
                return sum(1 for d in range(1, n + 1) if n % d == 0)
            count = 0
            def rec(m, parts):
                nonlocal count
                if parts == 1:
                    count += 1
                    return
                for d in range(1, m + 1):
                    if m % d == 0:
                        rec(m // d, parts - 1)
            rec(n, l)
            return count

        want = sum(tau_l(n) ** q for n in range(1, 301))
        assert ar.tau_power_sum(l, q, 300) == want

    def test_growth_ratio_bounded(self):
        # ratio sum / (x log^15 x) stays bounded (decreasing) on a dyadic grid
        ratios = [
            ar.tau_power_sum(4, 2, x) / (x * math.log(x) ** 15) for x in (10**4, 10**5)
        ]
        assert ratios[1] < ratios[0]

    def test_bad_args(self):
        with pytest.raises(ValueError):
            ar.tau_power_sum(1, 1, 10)
        with pytest.raises(ValueError):
            ar.tau_power_sum(2, 0, 10)


class TestPairSum:
    @staticmethod
    def brute(T):
        tau4 = []
        for n in range(T + 1):
            if n == 0:
                tau4.append(0)
                continue
            c = 0
            for a in range(1, n + 1):
                if n % a:
                    continue
                for b in range(1, n // a + 1):
                    if (n // a) % b:
                        continue
                    m = n // (a * b)
                    c += sum(1 for d in range(1, m + 1) if m % d == 0)
            tau4.append(c)
        s = 0.0
        for m in range(1, T + 1):
            for n in range(1, T + 1):
                if m == n:
                    continue
                s += (
                    tau4[m] ** 2
                    * tau4[n] ** 2
                    / ((m * n) ** (2 / 3) * abs(m ** (1 / 3) - n ** (1 / 3)))
                )
        return s

    def test_T2_closed_form(self):
        want = 2 * 16 / (2 ** (2 / 3) * (2 ** (1 / 3) - 1))
        assert ar.tau4_cuberoot_pair_sum(2) == pytest.approx(want, rel=1e-12)

    def test_monotone(self):
        assert ar.tau4_cuberoot_pair_sum(3) > ar.tau4_cuberoot_pair_sum(2)

    def test_brute_oracle(self):
        assert ar.tau4_cuberoot_pair_sum(60) == pytest.approx(self.brute(60), rel=1e-9)

    def test_paths_agree(self):
        # numba kernel (T > 2000) against the numpy fallback
        val = ar.tau4_cuberoot_pair_sum(2500)
        g_out = np.zeros(2501)
        t4 = ar.tau_table(4, 2500)[:2501].astype(np.float64)
        k = np.arange(2501, dtype=np.float64)
        c = np.cbrt(k)
        g = np.zeros(2501)
        g[1:] = t4[1:] ** 2 / k[1:] ** (2 / 3)
        ar._pair_partials_numpy(g, c, g_out)
        assert val == pytest.approx(2.0 * math.fsum(g_out.tolist()), rel=1e-10)

    def test_range_guard(self):
        with pytest.raises(ar.ArithError):
            ar.tau4_cuberoot_pair_sum(1)
        with pytest.raises(ar.ArithError):
            ar.tau4_cuberoot_pair_sum(10**5 + 1)


class TestIdentityChecks:
    def test_detects_corruption(self, field_nn2):
        t = ar.build_tables(field_nn2, 3000)
        aK = t.aK.copy()
        aK[100] += 1
        bad = ar.ArithTables(
            field_name=t.field_name,
            N=t.N,
            aK=aK,
            muK=t.muK,
            b=t.b,
            A_prefix=t.A_prefix,
            M_prefix=t.M_prefix,
        )
        assert ar.convolution_identity_failure(t, 3000) is None
        assert ar.convolution_identity_failure(bad, 3000) == 100
        assert ar.b_sum_identity_failure(t, 3000) is None
        assert ar.b_sum_identity_failure(bad, 3000) == 100

    def test_b_growth_statistic(self, tables_nn2_small):
        assert ar.b_growth_statistic(tables_nn2_small) > 0


class TestCharacter:
    def test_values_exact(self):
        chi = ar.cubic_character(7)
        assert chi[1] == (1, 0) and chi[6] == (1, 0)  # cubes are the kernel
        assert chi[0] == (0, 0)
        omega = {(1, 0), (0, 1), (-1, -1)}
        assert all(chi[r] in omega for r in range(1, 7))

    def test_bad_conductor(self):
        with pytest.raises(ar.ArithError):
            ar.cubic_character(5)  # 5 != 1 mod 3

    def test_b_identity_small(self, tables_c7_small):
        bchar = ar.b_from_cubic_character(7, 10**4)
        assert np.array_equal(bchar[1:], tables_c7_small.b[1:])

    def test_L1_series_stable(self):
        a = ar.L1_cubic_character(7, 10**5)
        b = ar.L1_cubic_character(7, 2 * 10**5)
        assert abs(a - b) < 1e-4


class TestTableIO:
    def test_roundtrip(self, tables_nn2_small, tmp_path):
        p = tmp_path / "t.bin"
        ar.write_tables(tables_nn2_small, p)
        back = ar.read_tables(p)
        assert back.field_name == tables_nn2_small.field_name
        assert back.N == tables_nn2_small.N
        for name in ("aK", "muK", "b", "A_prefix", "M_prefix"):
            assert np.array_equal(getattr(back, name), getattr(tables_nn2_small, name))

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "junk.bin"
        p.write_bytes(b"NOPE" + b"\x00" * 100)
        with pytest.raises(ar.ArithError, match="magic"):
            ar.read_tables(p)

    def test_truncated(self, tables_nn2_small, tmp_path):
        p = tmp_path / "t.bin"
        ar.write_tables(tables_nn2_small, p)
        data = p.read_bytes()
        p.write_bytes(data[:-16])
        with pytest.raises(ar.ArithError, match="truncated"):
            ar.read_tables(p)

    def test_csv_export(self, tables_nn2_small, tmp_path):
        p = tmp_path / "t.csv"
        ar.export_csv(tables_nn2_small, p, nmax=50)
        lines = p.read_text().strip().splitlines()
        assert lines[0] == "n,aK,muK,b,A,M"
        assert len(lines) == 51
        assert lines[1] == "1,1,1,1,1,1"
