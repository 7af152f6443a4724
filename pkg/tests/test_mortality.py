import math

import numpy as np
import pytest
from scipy import integrate
from scipy.optimize import least_squares

from unitlinked.mortality import (
    NO_MORTALITY,
    GompertzMakehamFit,
    MortalityDataError,
    MortalityTable,
    bundled_table,
    bundled_table_text,
    cumulative_hazard,
    empirical_hazard,
    fit_gompertz_makeham,
    fit_table,
    hazard,
    load_mortality_table,
    read_mortality_table,
    survival_probability,
)

SYNTH = GompertzMakehamFit(5e-4, 2e-5, 0.1)


class TestTable:
    def test_bundled_rows_match_published_table(self):
        t = bundled_table()
        rows = {int(a): (m, w, tot) for a, m, w, tot in zip(t.ages, t.men, t.women, t.total)}
        assert rows[64] == (737, 495, 1232)
        assert rows[89] == (12469, 9053, 21522)
        assert rows[4] == (50, 45, 95)
        assert rows[90] == (21909, 24230, 46139)
        assert len(rows) == 19

    def test_empirical_hazard(self):
        ages, rates = empirical_hazard(bundled_table())
        lookup = dict(zip(ages, rates))
        assert lookup[64.0] == 0.01232 and lookup[9.0] == 0.00009

    def test_zero_deaths(self):
        t = load_mortality_table("age,men,women,total\n10,0,0,0\n")
        assert empirical_hazard(t)[1][0] == 0.0

    def test_grouped_digits(self):
        t = load_mortality_table("age,men,women,total\n90,21 909,24 230,46139\n")
        assert t.men[0] == 21909

    @pytest.mark.parametrize("text,match", [
        ("", "empty"),
        ("\n\n", "empty"),
        ("age,men,women,total\n", "no data"),
        ("age,male,female,all\n1,2,3,4\n", "line 1"),
        ("age,men,women,total\n5,1,1,2\n10,1,x,2\n", "line 3"),
        ("age,men,women,total\n5,1,1\n", "line 2"),
        ("age,men,women,total\n10,1,1,2\n5,1,1,2\n", "increasing"),
        ("age,men,women,total\n10,1,-1,2\n", "negative"),
    ])
    def test_errors(self, text, match):
        with pytest.raises(MortalityDataError, match=match):
            load_mortality_table(text)

    def test_read_file(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text(bundled_table_text())
        assert np.array_equal(read_mortality_table(f).total, bundled_table().total)


class TestFit:
    def test_self_recovery(self):
        ages = np.arange(30, 81, dtype=float)
        fit = fit_gompertz_makeham(ages, hazard(SYNTH, ages), window=(30, 80))
        for got, want in [(fit.a, SYNTH.a), (fit.b, SYNTH.b), (fit.c, SYNTH.c)]:
            assert abs(got - want) <= 1e-3 * want

    def test_pure_gompertz(self):
        ages = np.arange(20, 91, dtype=float)
        fit = fit_gompertz_makeham(ages, 3e-5 * np.exp(0.09 * ages), window=(20, 90))
        assert abs(fit.a) <= 1e-5
        assert fit.c == pytest.approx(0.09, rel=1e-3)

    def test_window_is_inclusive_and_recorded(self):
        ages, rates = empirical_hazard(bundled_table())
        fit = fit_gompertz_makeham(ages, rates)
        assert fit.fit_window == (9.0, 89.0)
        x, y = ages[1:-1], rates[1:-1]
        sse = float(np.sum((fit.a + fit.b * np.exp(fit.c * x) - y) ** 2))
        assert fit.residual == pytest.approx(sse, rel=1e-12)

    def test_table_fit_is_a_least_squares_minimum(self, norway_fit):
        ages, rates = empirical_hazard(bundled_table())
        x, y = ages[1:-1], rates[1:-1]

        def resid(p):
            return p[0] + p[1] * np.exp(p[2] * x) - y

        best = min((least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, x_scale=[1e-3, 1e-6, 0.1])
                    for x0 in ([1e-3, 1e-5, 0.1], [0.0, 1e-6, 0.13], [5e-3, 1e-4, 0.08])),
                   key=lambda r: r.cost)
        assert norway_fit.residual <= 2 * best.cost * (1 + 1e-9)

    def test_table_fit_shape(self, norway_fit):
        assert norway_fit.b > 0 and norway_fit.c > 0
        age = np.linspace(30, 90, 200)
        assert np.all(np.diff(hazard(norway_fit, age)) > 0)
        assert np.all(hazard(norway_fit, np.linspace(0, 110, 500)) >= 0)

    def test_deterministic(self):
        t = bundled_table()
        assert fit_table(t) == fit_table(t)

    def test_too_few_points(self):
        with pytest.raises(ValueError, match="at least 4"):
            fit_gompertz_makeham([30, 40, 50], [1e-3, 2e-3, 4e-3], window=(0, 100))

    def test_all_zero(self):
        with pytest.raises(ValueError, match="zero"):
            fit_gompertz_makeham(np.arange(10.0), np.zeros(10), window=(0, 10))

    def test_flat_data_gives_nonnegative_hazard(self):
        fit = fit_gompertz_makeham(np.arange(10.0, 60.0), np.full(50, 2e-3), window=(0, 100))
        assert np.all(hazard(fit, np.linspace(0, 110, 50)) >= -1e-15)
        assert hazard(fit, 35.0) == pytest.approx(2e-3, rel=1e-3)


class TestSurvival:
    def test_hazard_examples(self):
        assert hazard(GompertzMakehamFit(3e-3, 0.0, 0.1), 55.0) == 3e-3
        assert hazard(SYNTH, 0.0) == pytest.approx(5e-4 + 2e-5, rel=1e-15)
        assert hazard(SYNTH, 70.0) == pytest.approx(0.02243266316856917199, rel=1e-14)

    def test_trivial(self):
        assert survival_probability(SYNTH, 40.0, 0.0) == 1.0
        assert survival_probability(GompertzMakehamFit(3e-3, 0.0, 0.1), 40.0, 7.0) == pytest.approx(
            math.exp(-0.021), rel=1e-15)
        assert survival_probability(NO_MORTALITY, 30.0, 50.0) == 1.0

    def test_chapman_kolmogorov(self, norway_fit):
        rng = np.random.default_rng(7)
        for fit in (SYNTH, norway_fit):
            x = rng.uniform(0, 90, 500)
            T = rng.uniform(0, 40, 500)
            s = rng.uniform(0, 1, 500) * T
            lhs = survival_probability(fit, x, s) * survival_probability(fit, x + s, T - s)
            rhs = survival_probability(fit, x, T)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_against_quadrature(self, norway_fit):
        rng = np.random.default_rng(8)
        for fit in (SYNTH, norway_fit):
            for x, T in zip(rng.uniform(0, 100, 200), rng.uniform(0, 60, 200)):
                integral = integrate.quad(lambda u: hazard(fit, u), x, x + T, epsabs=0, epsrel=1e-13)[0]
                assert cumulative_hazard(fit, x, T) == pytest.approx(integral, rel=1e-11)
                assert survival_probability(fit, x, T) == pytest.approx(math.exp(-integral), rel=1e-10)

    def test_alive_plus_dead_is_one(self, norway_fit):
        for x, T in [(30.0, 40.0), (60.0, 30.0), (0.0, 90.0)]:
            dead = integrate.quad(lambda s: survival_probability(norway_fit, x, s) * hazard(norway_fit, x + s),
                                  0, T, epsabs=1e-14, epsrel=1e-12)[0]
            assert survival_probability(norway_fit, x, T) + dead == pytest.approx(1.0, abs=1e-8)

    def test_monotone(self, norway_fit):
        T = np.linspace(0, 60, 300)
        p = survival_probability(norway_fit, 40.0, T)
        assert np.all(np.diff(p) < 0) and np.all((p > 0) & (p <= 1))

    def test_methods_delegate(self):
        assert SYNTH.hazard(10.0) == hazard(SYNTH, 10.0)
        assert SYNTH.survival(10.0, 5.0) == survival_probability(SYNTH, 10.0, 5.0)

    def test_table_validation(self):
        with pytest.raises(MortalityDataError):
            MortalityTable(np.array([]), np.array([]), np.array([]), np.array([]))
