#include <catch2/catch_amalgamated.hpp>

#include "chevtrunc/hwmod.hpp"

#include <random>

using namespace chevtrunc;

namespace {

Int fact_of(const std::vector<long>& a) {
    Int v = 1;
    for (long x : a) v *= factorial(x);
    return v;
}

// Quotient of the rational Verma module by the oracle-built maximal
// submodule, constructed entirely from the straightening-free action:
// per-slot row bases in ordinary-power monomial coordinates.
struct OracleQuotient {
    const HighestWeightModule& mod;
    DirectVermaAction act;
    // per slot: rref rows of the submodule, pivot columns, complement columns
    std::vector<Mat<Rat>> urows;
    std::vector<std::vector<std::size_t>> pivots, comp;

    OracleQuotient(const HighestWeightModule& m)
        : mod(m), act(m.engine().algebra(), m.highest_weight()) {
        const auto& rs = m.root_system();
        const auto& slots = m.slots();
        urows.resize(slots.size());
        pivots.resize(slots.size());
        comp.resize(slots.size());
        for (std::size_t si = 0; si < slots.size(); ++si) {
            const auto& s = slots[si];
            std::vector<std::vector<Rat>> rows;
            for (int j = 0; j < rs.rank; ++j) {
                std::vector<long> e(rs.rank, 0);
                e[j] = 1;
                auto rj = rs.find_positive(e);
                REQUIRE(rj.has_value());
                // seed at the singular-vector weight
                std::vector<long> seedgap(rs.rank, 0);
                seedgap[j] = static_cast<long>(m.highest_weight()[j]) + 1;
                if (s.gap == seedgap) {
                    std::vector<Rat> v(s.vdim(), 0);
                    std::vector<long> mono(rs.pos.size(), 0);
                    mono[*rj] = seedgap[j];
                    auto it = s.mono_index.find(mono);
                    REQUIRE(it != s.mono_index.end());
                    v[it->second] = 1;
                    rows.push_back(std::move(v));
                }
                // propagate from the slot one simple root above
                std::vector<long> above = s.gap;
                above[j] -= 1;
                bool ok = above[j] >= 0;
                if (!ok) continue;
                auto ai = m.slot_of(above);
                if (!ai) continue;
                const auto& up = slots[*ai];
                if (urows[*ai].rows == 0) continue;
                Mat<Rat> f = act.matrix(0, *rj, up.basis_a, s.basis_a);
                for (std::size_t r = 0; r < urows[*ai].rows; ++r) {
                    std::vector<Rat> v(s.vdim(), 0);
                    for (std::size_t c = 0; c < up.vdim(); ++c) {
                        if (urows[*ai](r, c) == 0) continue;
                        for (std::size_t t = 0; t < s.vdim(); ++t)
                            v[t] += f(t, c) * urows[*ai](r, c);
                    }
                    rows.push_back(std::move(v));
                }
            }
            Mat<Rat> rm(rows.size(), s.vdim());
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < s.vdim(); ++c) rm(r, c) = rows[r][c];
            Rref rr = rref(std::move(rm));
            Mat<Rat> basis(rr.pivot_cols.size(), s.vdim());
            for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r)
                for (std::size_t c = 0; c < s.vdim(); ++c) basis(r, c) = rr.r(r, c);
            urows[si] = std::move(basis);
            pivots[si] = rr.pivot_cols;
            std::vector<bool> isp(s.vdim(), false);
            for (auto p : rr.pivot_cols) isp[p] = true;
            for (std::size_t c = 0; c < s.vdim(); ++c)
                if (!isp[c]) comp[si].push_back(c);
        }
    }

    // reduce modulo the slot submodule, then read complement coordinates
    std::vector<Rat> project(std::size_t si, std::vector<Rat> v) const {
        for (std::size_t r = 0; r < urows[si].rows; ++r) {
            Rat c = v[pivots[si][r]];
            if (c == 0) continue;
            for (std::size_t t = 0; t < v.size(); ++t) v[t] -= c * urows[si](r, t);
        }
        std::vector<Rat> out(comp[si].size());
        for (std::size_t t = 0; t < comp[si].size(); ++t) out[t] = v[comp[si][t]];
        return out;
    }

    // single Chevalley generator (kind 0 = f, 2 = e) on quotient bases
    std::optional<std::pair<std::size_t, Mat<Rat>>> letter(int kind, std::size_t root,
                                                           std::size_t si) {
        const auto& rs = mod.root_system();
        const auto& s = mod.slots()[si];
        std::vector<long> tgap(rs.rank);
        for (int i = 0; i < rs.rank; ++i) {
            tgap[i] = s.gap[i] + (kind == 0 ? rs.pos[root].c[i] : -rs.pos[root].c[i]);
            if (tgap[i] < 0) return std::nullopt;
        }
        auto ti = mod.slot_of(tgap);
        if (!ti) return std::nullopt;
        const auto& d = mod.slots()[*ti];
        Mat<Rat> f = act.matrix(kind, root, s.basis_a, d.basis_a);
        Mat<Rat> out(comp[*ti].size(), comp[si].size());
        for (std::size_t j = 0; j < comp[si].size(); ++j) {
            std::vector<Rat> img(d.vdim(), 0);
            for (std::size_t t = 0; t < d.vdim(); ++t) img[t] = f(t, comp[si][j]);
            auto p = project(*ti, std::move(img));
            for (std::size_t t = 0; t < p.size(); ++t) out(t, j) = p[t];
        }
        return std::make_pair(*ti, out);
    }
};

} // namespace

TEST_CASE("closed dimension formula", "[hwmod]") {
    auto check = [](const char* type, std::vector<Int> lam, Int want) {
        auto rs = build_root_system(type);
        REQUIRE(weyl_dimension(rs, lam) == want);
    };
    check("A1", {3}, 4);
    check("A2", {1, 0}, 3);
    check("A2", {1, 1}, 8);
    check("A2", {3, 3}, 64);
    check("B2", {1, 0}, 5);
    check("B2", {0, 1}, 4);
    check("B2", {0, 2}, 10);
    check("B2", {1, 1}, 16);
    check("G2", {1, 0}, 7);
    check("G2", {0, 1}, 14);
    check("A3", {0, 1, 0}, 6);
    check("A3", {1, 0, 1}, 15);
}

TEST_CASE("multiplicity recursion sums to the closed dimension", "[hwmod]") {
    auto total = [](const char* type, std::vector<Int> lam) {
        auto rs = build_root_system(type);
        auto low = anti_dominant(rs, lam);
        long h = static_cast<long>(relative_height(rs, lam, low));
        FreudenthalTable ft(rs, lam, h);
        Int t = 0;
        for (const auto& [g, m] : ft.table()) t += m;
        return t;
    };
    REQUIRE(total("A2", {1, 1}) == 8);
    REQUIRE(total("A2", {3, 3}) == 64);
    REQUIRE(total("B2", {1, 1}) == 16);
    REQUIRE(total("B2", {2, 2}) == 81);
    REQUIRE(total("G2", {1, 0}) == 7);
    REQUIRE(total("G2", {0, 1}) == 14);
    REQUIRE(total("A3", {1, 0, 1}) == 15);

    auto rs = build_root_system("A2");
    FreudenthalTable ft(rs, {1, 1}, 4);
    REQUIRE(ft.multiplicity({1, 1}) == 2); // zero weight of the adjoint
    REQUIRE(ft.multiplicity({1, 0}) == 1);
    REQUIRE(ft.multiplicity({2, 2}) == 1); // lowest weight
}

TEST_CASE("kostant partitions", "[hwmod]") {
    auto rs = build_root_system("A2");
    auto p = kostant_partitions(rs, {1, 1});
    REQUIRE(p.size() == 2); // f1 f2 and f_{12}
    REQUIRE(std::is_sorted(p.begin(), p.end()));
    auto p2 = kostant_partitions(rs, {2, 1});
    REQUIRE(p2.size() == 2);
    auto rsB = build_root_system("B2");
    // 2 alpha1 + 2 alpha2 in B2 over the roots (0,1),(1,0),(1,1),(1,2):
    // three solutions without the height-3 root and one with it
    auto p3 = kostant_partitions(rsB, {2, 2});
    REQUIRE(p3.size() == 4);
    REQUIRE(kostant_partitions(rs, {0, 0}).size() == 1);
}

TEST_CASE("lattice ranks equal the multiplicity oracle", "[hwmod]") {
    struct Case { const char* type; std::vector<Int> lam; Int dim; };
    for (const Case& c : {Case{"A1", {3}, 4}, Case{"A2", {1, 1}, 8}, Case{"A2", {3, 3}, 64},
                          Case{"B2", {1, 1}, 16}, Case{"G2", {1, 0}, 7}}) {
        auto rs = build_root_system(c.type);
        ChevalleyAlgebra g(rs);
        StraighteningEngine eng(g);
        HighestWeightModule mod(eng, c.lam);
        FreudenthalTable ft(rs, c.lam, mod.depth());
        std::size_t total = 0;
        for (const auto& s : mod.slots()) {
            INFO(c.type << " gap " << s.gap[0]);
            REQUIRE(Int(s.lrank()) == ft.multiplicity(s.gap));
            total += s.lrank();
            REQUIRE(s.u_basis.cols + s.lrank() == s.vdim());
            if (s.u_basis.cols > 0) REQUIRE(columns_saturated(s.u_basis));
            // projector and representatives are mutually inverse on the quotient
            for (std::size_t i = 0; i < s.lrank(); ++i)
                for (std::size_t j = 0; j < s.lrank(); ++j) {
                    Int v = 0;
                    for (std::size_t t = 0; t < s.vdim(); ++t) v += s.proj(i, t) * s.reps(t, j);
                    REQUIRE(v == (i == j ? 1 : 0));
                }
            for (std::size_t i = 0; i < s.lrank(); ++i)
                for (std::size_t j = 0; j < s.u_basis.cols; ++j) {
                    Int v = 0;
                    for (std::size_t t = 0; t < s.vdim(); ++t) v += s.proj(i, t) * s.u_basis(t, j);
                    REQUIRE(v == 0);
                }
        }
        REQUIRE(Int(total) == c.dim);
        REQUIRE(Int(mod.total_rank()) == weyl_dimension(rs, c.lam));
    }
}

TEST_CASE("pinned rank-one actions", "[hwmod]") {
    auto rs = build_root_system("A1");
    ChevalleyAlgebra g(rs);
    StraighteningEngine eng(g);
    HighestWeightModule mod(eng, {3});
    REQUIRE(mod.slots().size() == 4);
    // e f^(2) v = (lambda - 1) f v
    auto a = mod.lattice_action(Generator{Generator::E, 0, 1}, 2);
    REQUIRE(a.has_value());
    REQUIRE(a->first == 1);
    REQUIRE(a->second(0, 0) == 2);
    // f f v = 2 f^(2) v
    auto b = mod.lattice_action(Generator{Generator::F, 0, 1}, 1);
    REQUIRE(b.has_value());
    REQUIRE(b->first == 2);
    REQUIRE(b->second(0, 0) == 2);
    // h on slot ht 1: weight 3 - 2 = 1
    auto c = mod.lattice_action(Generator{Generator::H, 0, 1}, 1);
    REQUIRE(c->first == 1);
    REQUIRE(c->second(0, 0) == 1);
    // e^(3) from the bottom to the top is the binomial coefficient 1
    auto d = mod.lattice_action(Generator{Generator::E, 0, 3}, 3);
    REQUIRE(d->first == 0);
    REQUIRE(d->second(0, 0) == 1);
}

TEST_CASE("straightened action equals the bare Lie recursion on Verma slots", "[hwmod][oracle]") {
    for (const char* type : {"A1", "A2", "B2"}) {
        auto rs = build_root_system(type);
        ChevalleyAlgebra g(rs);
        StraighteningEngine eng(g);
        std::vector<Int> lam(rs.rank, 1);
        if (rs.rank == 1) lam = {3};
        HighestWeightModule mod(eng, lam);
        DirectVermaAction oracle(g, lam);
        for (std::size_t si = 0; si < mod.slots().size(); ++si) {
            const auto& s = mod.slots()[si];
            for (int kind : {0, 2}) {
                for (std::size_t r = 0; r < rs.pos.size(); ++r) {
                    Generator gen{kind == 0 ? Generator::F : Generator::E, r, 1};
                    auto tg = mod.image_gap(gen, s.gap);
                    if (!tg) continue;
                    auto ti = mod.slot_of(*tg);
                    if (!ti) continue;
                    const auto& d = mod.slots()[*ti];
                    Mat<Rat> ord = oracle.matrix(kind, r, s.basis_a, d.basis_a);
                    // straightened divided-basis action, conjugated to
                    // ordinary powers by the factorial diagonal
                    for (std::size_t j = 0; j < s.vdim(); ++j) {
                        auto col = mod.verma_action_on_monomial(gen, si, j);
                        for (std::size_t i = 0; i < d.vdim(); ++i) {
                            Rat expect = Rat(col[i]) * Rat(fact_of(s.basis_a[j])) /
                                         Rat(fact_of(d.basis_a[i]));
                            REQUIRE(ord(i, j) == expect);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("random straightened products match the oracle on the quotient", "[hwmod][oracle]") {
    std::mt19937 rng(20240817);
    for (const char* type : {"A2", "B2"}) {
        auto rs = build_root_system(type);
        ChevalleyAlgebra g(rs);
        StraighteningEngine eng(g);
        std::vector<Int> lam(rs.rank, 1);
        HighestWeightModule mod(eng, lam);
        OracleQuotient oq(mod);

        // quotient ranks agree with the integral construction
        for (std::size_t si = 0; si < mod.slots().size(); ++si)
            REQUIRE(oq.comp[si].size() == mod.slots()[si].lrank());

        auto apply_letter = [&](int kind, std::size_t root, long n,
                                std::optional<std::size_t>& si,
                                Mat<Rat>& m) {
            if (!si) return;
            Mat<Rat> step;
            std::size_t cur = *si;
            bool dead = false;
            for (long t = 0; t < n; ++t) {
                auto r = oq.letter(kind, root, cur);
                if (!r) { dead = true; break; }
                step = t == 0 ? r->second : r->second * step;
                cur = r->first;
            }
            if (dead) { si = std::nullopt; return; }
            Rat inv = Rat(1) / Rat(factorial(n));
            for (auto& v : step.a) v *= inv;
            si = cur;
            m = step * m;
        };

        int tested = 0;
        for (int trial = 0; trial < 60; ++trial) {
            int len = 1 + int(rng() % 6);
            struct Letter { int kind; std::size_t idx; long n; };
            std::vector<Letter> word;
            for (int i = 0; i < len; ++i) {
                int k = int(rng() % 3);
                if (k == 1) word.push_back({1, std::size_t(rng() % rs.rank), 1});
                else word.push_back({k, std::size_t(rng() % rs.pos.size()), 1 + long(rng() % 2)});
            }
            Word w;
            for (const auto& l : word) {
                if (l.kind == 0) w.push_back({eng.code_neg(l.idx), l.n});
                else if (l.kind == 1) w.push_back({eng.code_toral(static_cast<int>(l.idx)), l.n});
                else w.push_back({eng.code_pos(l.idx), l.n});
            }
            PbwElem straightened = eng.straighten(w);

            for (std::size_t start = 0; start < mod.slots().size(); ++start) {
                if (mod.slots()[start].lrank() == 0) continue;
                std::size_t n0 = oq.comp[start].size();
                // left side: compose the oracle letters right to left
                std::optional<std::size_t> si = start;
                Mat<Rat> lhs(n0, n0);
                for (std::size_t i = 0; i < n0; ++i) lhs(i, i) = 1;
                for (auto it = word.rbegin(); it != word.rend(); ++it) {
                    if (!si) break;
                    if (it->kind == 1) {
                        Rat mu = Rat(mod.slots()[*si].mu[it->idx]);
                        for (auto& v : lhs.a) v *= mu;
                    } else {
                        apply_letter(it->kind == 0 ? 0 : 2, it->idx, it->n, si, lhs);
                    }
                }
                // right side: evaluate each straightened monomial
                std::optional<std::size_t> rslot;
                Mat<Rat> rhs;
                bool rset = false;
                for (const auto& [mono, coeff] : straightened) {
                    std::optional<std::size_t> mi = start;
                    Mat<Rat> cur(n0, n0);
                    for (std::size_t i = 0; i < n0; ++i) cur(i, i) = 1;
                    for (std::size_t r = rs.pos.size(); r-- > 0;)
                        if (mono.e[r] > 0) apply_letter(2, r, mono.e[r], mi, cur);
                    if (mi) {
                        Rat t = coeff;
                        for (int i = 0; i < rs.rank; ++i)
                            for (long q = 0; q < mono.b[i]; ++q) t *= Rat(mod.slots()[*mi].mu[i]);
                        for (auto& v : cur.a) v *= t;
                    }
                    for (std::size_t r = rs.pos.size(); r-- > 0;)
                        if (mi && mono.f[r] > 0) apply_letter(0, r, mono.f[r], mi, cur);
                    if (!mi) continue;
                    bool zero = true;
                    for (const auto& v : cur.a)
                        if (v != 0) zero = false;
                    if (zero) continue;
                    if (!rset) { rslot = mi; rhs = cur; rset = true; }
                    else {
                        REQUIRE(rslot == mi);
                        rhs = rhs + cur;
                    }
                }
                if (!si) {
                    // an intermediate weight left the module, so the whole
                    // product vanishes; the straightened side must agree
                    if (rset)
                        for (const auto& v : rhs.a) REQUIRE(v == 0);
                    continue;
                }
                if (!rset) {
                    for (const auto& v : lhs.a) REQUIRE(v == 0);
                } else {
                    REQUIRE(rslot == si);
                    REQUIRE(lhs.rows == rhs.rows);
                    for (std::size_t t = 0; t < lhs.a.size(); ++t) REQUIRE(lhs.a[t] == rhs.a[t]);
                }
                ++tested;
            }
        }
        REQUIRE(tested >= 100);
    }
}

TEST_CASE("one-parameter generator matrices are unipotent of determinant one", "[hwmod]") {
    auto rs = build_root_system("A1");
    ChevalleyAlgebra g(rs);
    StraighteningEngine eng(g);
    HighestWeightModule mod(eng, {3});
    Mat<Rat> x = mod.one_parameter_matrix(true, 0, Rat(1));
    REQUIRE(x.rows == 4);
    REQUIRE(det(x) == 1);
    Mat<Rat> nilp = x;
    for (std::size_t i = 0; i < 4; ++i) nilp(i, i) -= 1;
    Mat<Rat> p = nilp * nilp * nilp * nilp;
    for (const auto& v : p.a) REQUIRE(v == 0);

    auto rsB = build_root_system("B2");
    ChevalleyAlgebra gB(rsB);
    StraighteningEngine engB(gB);
    HighestWeightModule modB(engB, {1, 1});
    for (std::size_t r = 0; r < rsB.pos.size(); ++r) {
        REQUIRE(det(modB.one_parameter_matrix(true, r, Rat(2))) == 1);
        REQUIRE(det(modB.one_parameter_matrix(false, r, Rat(-3))) == 1);
    }
}

TEST_CASE("weight lattice index", "[hwmod]") {
    auto rs = build_root_system("A1");
    ChevalleyAlgebra g(rs);
    StraighteningEngine eng(g);
    REQUIRE(HighestWeightModule(eng, {1}).weight_lattice_index() == 1);
    REQUIRE(HighestWeightModule(eng, {2}).weight_lattice_index() == 2);
    auto rs2 = build_root_system("A2");
    ChevalleyAlgebra g2(rs2);
    StraighteningEngine eng2(g2);
    REQUIRE(HighestWeightModule(eng2, {1, 0}).weight_lattice_index() == 1);
    REQUIRE(HighestWeightModule(eng2, {1, 1}).weight_lattice_index() == 3);
}

TEST_CASE("depth cutoff and dimension cap", "[hwmod]") {
    auto rs = build_root_system("A1");
    ChevalleyAlgebra g(rs);
    StraighteningEngine eng(g);
    HighestWeightModule mod(eng, {135}, 2);
    REQUIRE(mod.slots().size() == 3);
    for (const auto& s : mod.slots()) {
        REQUIRE(s.lrank() == 1);
        REQUIRE(s.u_basis.cols == 0);
    }
    auto a = mod.lattice_action(Generator{Generator::E, 0, 1}, 2);
    REQUIRE(a->second(0, 0) == 134);
    REQUIRE(mod.full_depth() == 135);

    auto rs2 = build_root_system("A2");
    ChevalleyAlgebra g2(rs2);
    StraighteningEngine eng2(g2);
    REQUIRE_THROWS_AS(HighestWeightModule(eng2, {15, 15}), std::invalid_argument);
    HighestWeightModule ok(eng2, {15, 15}, 1);
    REQUIRE(ok.slots().size() == 3);
}
