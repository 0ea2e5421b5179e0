#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chevtrunc/slopes.hpp"

using namespace chevtrunc;

namespace {

// Polynomial with prescribed slope multiset: product of (X - u * p^a) over
// the given exponents, with units u coprime to p.
std::vector<Int> slope_product(const std::vector<long>& exps, long p, std::mt19937& rng) {
    std::vector<Int> poly{1};
    std::uniform_int_distribution<long> unit(1, p - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    for (long a : exps) {
        long u = unit(rng) + p * unit(rng);  // unit mod p, occasionally > p
        if (sign(rng)) u = -u;
        std::vector<Int> lin{1, Int(u) * ipow(Int(p), a)};
        poly = poly_mul(poly, lin);
    }
    return poly;
}

Mat<Int> random_unimodular(std::size_t n, std::mt19937& rng) {
    Mat<Int> u(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, i) = 1;
    std::uniform_int_distribution<long> coef(-2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int step = 0; step < 12; ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        long t = coef(rng);
        for (std::size_t c = 0; c < n; ++c) u(i, c) += Int(t) * u(j, c);
    }
    return u;
}

Mat<Int> mat_inverse_unimodular(const Mat<Int>& u) {
    Snf s = snf(u);
    // u = uinv_s * d * vinv_s with d = +-1 diagonal; invert directly via the
    // adjugate route: for unimodular input, solve over rationals and round.
    std::size_t n = u.rows;
    Mat<Rat> ur(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ur(i, j) = Rat(u(i, j));
    Mat<Int> out(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Rat> e(n, Rat(0));
        e[c] = 1;
        auto x = solve(ur, e);
        REQUIRE(x);
        for (std::size_t r = 0; r < n; ++r) out(r, c) = to_int((*x)[r]);
    }
    (void)s;
    return out;
}

}  // namespace

TEST_CASE("newton polygon pinned examples", "[slopes]") {
    // X^2 - p X + p^3: vertices (0,0), (1,1), (2,3): slopes 1 and 2.
    auto prof = newton_slopes({1, -5, 125}, 5);
    REQUIRE(prof.segments.size() == 2);
    REQUIRE(prof.segments[0].slope == Rat(1));
    REQUIRE(prof.segments[0].length == 1);
    REQUIRE(prof.segments[1].slope == Rat(2));
    REQUIRE(prof.segments[1].length == 1);
    REQUIRE(prof.infinite == 0);
    REQUIRE(prof.d(Rat(0)) == 0);
    REQUIRE(prof.d(Rat(1)) == 1);
    REQUIRE(prof.d(Rat(3, 2)) == 1);
    REQUIRE(prof.d(Rat(2)) == 2);

    // (X - 1)^4: single slope-zero segment.
    std::vector<Int> pw{1};
    for (int i = 0; i < 4; ++i) pw = poly_mul(pw, {1, -1});
    auto prof0 = newton_slopes(pw, 7);
    REQUIRE(prof0.segments.size() == 1);
    REQUIRE(prof0.segments[0].slope == Rat(0));
    REQUIRE(prof0.segments[0].length == 4);

    // X^2 - p^2: one segment of slope 1, length 2.
    auto prof1 = newton_slopes({1, 0, -25}, 5);
    REQUIRE(prof1.segments.size() == 1);
    REQUIRE(prof1.segments[0].slope == Rat(1));
    REQUIRE(prof1.segments[0].length == 2);

    // Trailing zeros separate as infinite slope.
    auto prof2 = newton_slopes({1, -5, 0, 0}, 5);
    REQUIRE(prof2.infinite == 2);
    REQUIRE(prof2.finite_total() == 1);
    REQUIRE(prof2.segments[0].slope == Rat(1));
    REQUIRE(prof2.d(Rat(100)) == 1);  // infinite slopes never counted

    // Fractional slope: X^2 - p: slope 1/2 twice.
    auto prof3 = newton_slopes({1, 0, -5}, 5);
    REQUIRE(prof3.segments.size() == 1);
    REQUIRE(prof3.segments[0].slope == Rat(1, 2));
    REQUIRE(prof3.segments[0].length == 2);
    REQUIRE(prof3.d(Rat(1, 3)) == 0);
    REQUIRE(prof3.d(Rat(1, 2)) == 2);
}

TEST_CASE("newton polygon against factored products", "[slopes]") {
    std::mt19937 rng(20240817);
    for (long p : {2L, 5L, 13L}) {
        for (int trial = 0; trial < 18; ++trial) {
            std::uniform_int_distribution<long> len(1, 7), ex(0, 5);
            std::vector<long> exps(static_cast<std::size_t>(len(rng)));
            for (auto& e : exps) e = ex(rng);
            auto poly = slope_product(exps, p, rng);
            auto prof = newton_slopes(poly, p);
            std::sort(exps.begin(), exps.end());
            std::vector<long> got;
            for (const auto& s : prof.segments) {
                REQUIRE(is_integer(s.slope));  // all factors have integer slope
                for (long t = 0; t < s.length; ++t) got.push_back(static_cast<long>(to_int(s.slope)));
            }
            REQUIRE(got == exps);
            // d is the counting function of the multiset.
            for (long b = 0; b <= 6; ++b) {
                long expect = static_cast<long>(
                    std::count_if(exps.begin(), exps.end(), [b](long e) { return e <= b; }));
                REQUIRE(prof.d(Rat(b)) == expect);
            }
        }
    }
}

TEST_CASE("modular characteristic polynomial matches exact", "[slopes]") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> entry(-50, 50);
    for (const Int& modulus : {ipow(Int(5), 12), ipow(Int(7), 9), ipow(Int(2), 30)}) {
        for (std::size_t n : {1, 2, 5, 8}) {
            Mat<Int> a(n, n);
            for (auto& v : a.a) v = entry(rng);
            auto exact = charpoly(a);
            auto res = charpoly_mod(a, modulus);
            REQUIRE(exact.size() == res.size());
            for (std::size_t i = 0; i < res.size(); ++i)
                REQUIRE(mod_reduce(exact[i], modulus) == res[i]);
        }
    }
    REQUIRE_THROWS_AS(charpoly_mod(Mat<Int>(1, 2), ipow(Int(5), 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(charpoly_mod(Mat<Int>(1, 1), Int(1)), std::invalid_argument);
}

TEST_CASE("polynomial division round trips", "[slopes]") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<long> entry(-9, 9);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<long> len(1, 6);
        std::vector<Int> q(static_cast<std::size_t>(len(rng)) + 1), d(static_cast<std::size_t>(len(rng)) + 1);
        for (auto& v : q) v = entry(rng);
        for (auto& v : d) v = entry(rng);
        if (q[0] == 0) q[0] = 3;
        if (d[0] == 0) d[0] = 2;
        auto n = poly_mul(q, d);
        REQUIRE(poly_divide_exact(n, d) == q);

        // Monic modular variant.
        Int m = ipow(Int(5), 10);
        d[0] = 1;
        auto nm = poly_mul_mod(poly_mod(q, m), poly_mod(d, m), m);
        REQUIRE(poly_divide_monic_mod(nm, poly_mod(d, m), m) == poly_mod(q, m));
    }
    // A residue-level division failure must throw.
    REQUIRE_THROWS_AS(poly_divide_exact({1, 0, 1}, {1, 1}), std::logic_error);
}

TEST_CASE("slope counts from residues with certified precision", "[slopes]") {
    std::mt19937 rng(4099);
    long p = 5;
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<long> len(2, 8), ex(0, 4);
        std::vector<long> exps(static_cast<std::size_t>(len(rng)));
        for (auto& e : exps) e = ex(rng);
        auto poly = slope_product(exps, p, rng);
        long n = static_cast<long>(poly.size()) - 1;
        for (long beta : {0L, 1L, 2L, 3L}) {
            long cap = beta * n + 3;
            auto res = poly_mod(poly, ipow(Int(p), cap));
            long want = newton_slopes(poly, p).d(Rat(beta));
            REQUIRE(d_beta_from_residues(res, Int(p), cap, Rat(beta)) == want);
        }
    }
    // Insufficient precision is refused, not silently miscounted.
    REQUIRE_THROWS_AS(d_beta_from_residues({1, 0, 0, 0}, Int(5), 2, Rat(1)),
                      std::logic_error);
}

TEST_CASE("smith normal form factorizations", "[slopes]") {
    {
        Mat<Int> a(2, 2);
        a(0, 0) = 2;
        a(1, 1) = 3;
        auto t = smith_normal_form(a);
        REQUIRE(t.d(0, 0) == 1);
        REQUIRE(t.d(1, 1) == 6);
    }
    {
        auto t = smith_normal_form(Mat<Int>(2, 3));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) REQUIRE(t.d(i, j) == 0);
    }
    std::mt19937 rng(55);
    std::uniform_int_distribution<long> entry(-20, 20);
    for (int trial = 0; trial < 15; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        std::size_t r = dim(rng), c = dim(rng);
        Mat<Int> a(r, c);
        for (auto& v : a.a) v = entry(rng);
        auto t = smith_normal_form(a);
        // Reconstruction.
        Mat<Int> prod = t.u * t.d * t.w;
        REQUIRE(prod == a);
        // Diagonal divisibility chain.
        for (std::size_t i = 0; i + 1 < std::min(r, c); ++i) {
            if (t.d(i + 1, i + 1) == 0) continue;
            REQUIRE(t.d(i, i) != 0);
            REQUIRE(t.d(i + 1, i + 1) % t.d(i, i) == 0);
        }
    }
}

TEST_CASE("elementary divisor bound on truncated image", "[slopes]") {
    Int p(5);
    {
        Mat<Int> t(3, 3);
        t(0, 0) = 1;
        t(1, 1) = 5;
        t(2, 2) = 25;
        auto rep = verify_dimension_bound(t, p, Rat(2), 3);
        REQUIRE(rep.lhs == 6);
        REQUIRE(rep.rhs == 6);
        REQUIRE(rep.equality);
        REQUIRE(!rep.corollary_checked);  // needs r > beta + 1 strictly
        REQUIRE(!rep.notice.empty());
    }
}

TEST_CASE("elementary divisor bound under unimodular change of basis", "[slopes]") {
    Int p(5);
    Mat<Int> t(3, 3);
    t(0, 0) = 1;
    t(1, 1) = 5;
    t(2, 2) = 25;
    std::mt19937 rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        Mat<Int> u = random_unimodular(3, rng);
        Mat<Int> uinv = mat_inverse_unimodular(u);
        Mat<Int> conj = u * t * uinv;
        auto rep = verify_dimension_bound(conj, p, Rat(2), 3);
        REQUIRE(rep.lhs == 6);
        REQUIRE(rep.rhs == 6);
        REQUIRE(rep.equality);
    }
}

TEST_CASE("elementary divisor bound edge cases", "[slopes]") {
    Int p(5);
    {
        // Non-semisimple: [[5,1],[0,5]] has slopes 1,1 but divisors 1, 25.
        Mat<Int> t(2, 2);
        t(0, 0) = 5;
        t(0, 1) = 1;
        t(1, 1) = 5;
        auto rep = verify_dimension_bound(t, p, Rat(1), 3);
        REQUIRE(rep.lhs == 4);
        REQUIRE(rep.rhs == 4);
        REQUIRE(rep.inequality_holds);
        REQUIRE(rep.corollary_checked);  // 3 > 2
        REQUIRE(rep.corollary_holds);
    }
    {
        // Slope above r makes a term negative; flagged, never clamped.
        Mat<Int> t(1, 1);
        t(0, 0) = ipow(p, 5);
        auto rep = verify_dimension_bound(t, p, Rat(5), 1);
        REQUIRE(rep.negative_terms);
        REQUIRE(rep.lhs == -4);
        REQUIRE(rep.rhs == 0);
        REQUIRE(rep.inequality_holds);
        REQUIRE(!rep.corollary_checked);
        REQUIRE(!rep.notice.empty());
    }
    {
        // Slopes above beta are a usage error.
        Mat<Int> t(2, 2);
        t(0, 0) = 1;
        t(1, 1) = 5;
        REQUIRE_THROWS_AS(verify_dimension_bound(t, p, Rat(1, 2), 3), std::invalid_argument);
    }
    {
        // Singular operators are rejected.
        Mat<Int> t(2, 2);
        t(0, 0) = 1;
        REQUIRE_THROWS_AS(verify_dimension_bound(t, p, Rat(0), 2), std::invalid_argument);
    }
}

TEST_CASE("slope dimension helper", "[slopes]") {
    Mat<Int> t(3, 3);
    t(0, 0) = 1;
    t(1, 1) = 5;
    t(2, 2) = 125;
    REQUIRE(slope_dimension(t, Int(5), Rat(0)) == 1);
    REQUIRE(slope_dimension(t, Int(5), Rat(1)) == 2);
    REQUIRE(slope_dimension(t, Int(5), Rat(2)) == 2);
    REQUIRE(slope_dimension(t, Int(5), Rat(3)) == 3);
}
