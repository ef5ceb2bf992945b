import unittest
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from series.eisenstein import eisenstein_series
from series.ring import TruncatedSeries
from utils.errors import ModulusMismatchError, NotInvertibleError, PrecisionError

MODULI = [2, 3, 5, 7, 11, 13, 49, 81, 243]
PRIMES = [5, 7, 11, 13]


@st.composite
def series_lists(draw, count, moduli=MODULI):
    modulus = draw(st.sampled_from(moduli))
    length = draw(st.integers(1, 25))
    coefficients = st.lists(st.integers(0, modulus - 1), min_size=length, max_size=length)
    return [TruncatedSeries(draw(coefficients), modulus, 0, length) for _ in range(count)]


class TestTruncatedSeries(unittest.TestCase):

    def test_add_cancels(self):
        f = TruncatedSeries([1, 1], 5, 0, 3)
        g = TruncatedSeries([1, -1], 5, 0, 3)
        self.assertEqual((f + g).coefficients().tolist(), [2, 0, 0])

    def test_add_zero_is_identity(self):
        f = TruncatedSeries([3, 0, 2, 1], 7)
        self.assertEqual(f + TruncatedSeries.zero(7, 4), f)

    def test_add_merges_valuations(self):
        f = TruncatedSeries([1, 1], 7, -1, 3)
        g = TruncatedSeries([1, 1], 7, 0, 3)
        total = f + g
        self.assertEqual(total.valuation, -1)
        self.assertEqual(total.coefficients(-1, 3).tolist(), [1, 2, 1, 0])

    def test_modulus_mismatch(self):
        with self.assertRaises(ModulusMismatchError):
            TruncatedSeries([1], 5) + TruncatedSeries([1], 7)

    def test_mul_difference_of_squares(self):
        f = TruncatedSeries([1, 1], 5, 0, 3)
        g = TruncatedSeries([1, -1], 5, 0, 3)
        product = f * g
        self.assertEqual(product.coefficients().tolist(), [1, 0, 4])
        self.assertEqual(str(product), "1 + 4*q^2")

    def test_mul_by_one(self):
        f = TruncatedSeries([2, 3, 4], 11)
        self.assertEqual(f * TruncatedSeries.one(11, 3), f)

    def test_e4_e6_mod_11(self):
        product = eisenstein_series(4, 11, 3) * eisenstein_series(6, 11, 3)
        self.assertEqual(product.coefficients().tolist(), [1, 0, 0])

    def test_mul_precision_uses_valuations(self):
        f = TruncatedSeries([0, 0, 1], 7, 0, 5)
        g = TruncatedSeries([1, 1, 1], 7, 0, 3)
        self.assertEqual((f * g).precision, 5)

    def test_invert_geometric(self):
        f = TruncatedSeries([1, -1], 7, 0, 4)
        self.assertEqual(f.invert().coefficients().tolist(), [1, 1, 1, 1])

    def test_invert_one(self):
        self.assertEqual(TruncatedSeries.one(13, 10).invert(), TruncatedSeries.one(13, 10))

    def test_inverse_of_e4_mod_9(self):
        self.assertEqual(eisenstein_series(4, 9, 10).invert().coefficient(2), 0)

    def test_invert_refuses_non_units(self):
        with self.assertRaises(NotInvertibleError):
            TruncatedSeries([3, 1], 9, 0, 4).invert()
        with self.assertRaises(NotInvertibleError):
            TruncatedSeries([1, 1], 9, 1, 4).invert()

    def test_pow(self):
        f = TruncatedSeries([1, 1], 5, 0, 6)
        self.assertEqual((f ** 5).coefficients().tolist(), [1, 0, 0, 0, 0, 1])
        self.assertEqual(f ** 0, TruncatedSeries.one(5, 6))
        self.assertTrue((f ** -1 * f).agrees_with(TruncatedSeries.one(5, 6)))

    def test_theta(self):
        f = TruncatedSeries([1, 1, 4], 11)
        self.assertEqual(f.theta().coefficients().tolist(), [0, 1, 8])
        self.assertTrue(TruncatedSeries.one(11, 5).theta().is_zero())

    def test_theta_on_negative_exponents(self):
        f = TruncatedSeries([1, 0, 1], 7, -1, 2)
        self.assertEqual(f.theta().coefficients(-1, 2).tolist(), [6, 0, 1])

    def test_extract_progression(self):
        f = TruncatedSeries([1, 2, 3, 4], 11)
        progression = f.extract_progression(1, 2)
        self.assertEqual(progression.coefficients().tolist(), [2, 4])
        self.assertTrue(TruncatedSeries.zero(5, 10).extract_progression(2, 3).is_zero())
        with self.assertRaises(ValueError):
            f.extract_progression(2, 2)

    def test_inverse_e6_progression_mod_27(self):
        inverse = eisenstein_series(6, 27, 300).invert()
        self.assertTrue(inverse.extract_progression(2, 3).is_zero())

    def test_change_modulus(self):
        e2 = eisenstein_series(2, 243, 40)
        self.assertEqual(e2.change_modulus(3), TruncatedSeries.one(3, 40))
        self.assertEqual(e2.change_modulus(243), e2)
        self.assertEqual(eisenstein_series(4, 81, 5).change_modulus(3).coefficient(0), 1)
        with self.assertRaises(ValueError):
            e2.change_modulus(5)

    def test_coefficient_beyond_precision(self):
        with self.assertRaises(PrecisionError):
            TruncatedSeries([1, 2], 5).coefficient(2)

    def test_zero_is_canonical(self):
        zero = TruncatedSeries([0, 0, 0], 5, 2, 6)
        self.assertEqual(zero.valuation, 0)
        self.assertEqual(len(zero.coeffs), 6)
        self.assertEqual(str(zero), "0")

    def test_shift_to_negative_exponents(self):
        f = TruncatedSeries([1, 2, 3], 7, 0, 3).shift(-2)
        self.assertEqual((f.valuation, f.precision), (-2, 1))
        self.assertEqual(f.coefficients(-2).tolist(), [1, 2, 3])
        self.assertEqual(f.shift(2).coefficients().tolist(), [1, 2, 3])

    def test_truncate(self):
        f = TruncatedSeries([1, 2, 3], 7, 0, 3).shift(2)
        self.assertEqual(f.truncate(4).coefficients().tolist(), [0, 0, 1, 2])
        self.assertEqual(f.truncate(10).precision, 5)

    def test_large_modulus_products(self):
        m = 2**61 - 1
        f = TruncatedSeries([m - 1, m - 1], m, 0, 2)
        self.assertEqual((f * f).coefficients().tolist(), [1, 2])


class TestTruncatedSeriesProperties(unittest.TestCase):

    @settings(max_examples=250, deadline=None)
    @given(series_lists(3))
    def test_ring_axioms(self, triple):
        f, g, h = triple
        self.assertTrue((f * g).agrees_with(g * f))
        self.assertTrue(((f * g) * h).agrees_with(f * (g * h)))
        self.assertTrue((f * (g + h)).agrees_with(f * g + f * h))
        self.assertTrue((f + g - g).agrees_with(f))

    @settings(max_examples=250, deadline=None)
    @given(series_lists(1), st.data())
    def test_inverse_is_two_sided(self, single, data):
        f = single[0]
        unit = data.draw(st.integers(1, f.modulus - 1).filter(lambda c: gcd(c, f.modulus) == 1))
        f = f + (unit - f.coefficient(0))
        one = TruncatedSeries.one(f.modulus, f.precision)
        self.assertTrue((f * f.invert()).agrees_with(one))
        self.assertTrue((f.invert() * f).agrees_with(one))

    @settings(max_examples=250, deadline=None)
    @given(series_lists(2))
    def test_theta_product_rule(self, pair):
        f, g = pair
        self.assertTrue((f * g).theta().agrees_with(f.theta() * g + f * g.theta()))

    @settings(max_examples=250, deadline=None)
    @given(series_lists(1, moduli=PRIMES))
    def test_fermat_and_frobenius(self, single):
        f = single[0]
        ell = f.modulus
        self.assertEqual(f.theta(ell), f.theta())
        self.assertTrue(all(n % ell == 0 for n, _ in (f ** ell).terms()))


if __name__ == '__main__':
    unittest.main()
