#pragma once

// p-power truncations of integral highest-weight lattices: the scaled
// sublattice (p^{r-ht} at height ht <= r, full spaces deeper), the finite
// quotient group it defines, the scaled-generator and level-group actions
// as matrices with per-slot moduli, and the monomial-matching comparison
// map between truncations of congruent highest weights together with its
// equivariance verifier.

#include "chevtrunc/hwmod.hpp"

namespace chevtrunc {

struct TruncationSpec {
    Int p;
    long r;
    TruncationSpec(Int p_, long r_) : p(std::move(p_)), r(r_) {
        if (r < 0) throw std::invalid_argument("truncation length must be non-negative");
        if (p < 2) throw std::invalid_argument("p must be prime");
        for (Int d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("p must be prime");
    }
    long congruence_power() const { return congruence_exponent(static_cast<long>(p), r); }
    Int congruence_modulus() const { return ipow(p, congruence_power()); }
};

// scaled generator: f_alpha^(n), or p^{n ht(alpha)} e_alpha^(n)
struct SGen {
    bool positive;
    std::size_t alpha;
    long n;
};

inline std::string sgen_name(const RootSystem& rs, const SGen& g) {
    std::string s = g.positive ? "p^" : "f[";
    if (g.positive) {
        s += std::to_string(g.n * rs.pos[g.alpha].ht) + "*e[";
    }
    for (int i = 0; i < rs.rank; ++i) {
        if (i) s += ",";
        s += std::to_string(rs.pos[g.alpha].c[i]);
    }
    s += "]^(" + std::to_string(g.n) + ")";
    return s;
}

struct TruncSlot {
    std::vector<Int> mu;
    std::vector<long> gap;
    long ht;
    std::size_t rank;
    long exponent;          // r - ht
    std::size_t module_slot; // index into the backing lattice module
};

// A linear map between truncations, stored as one dense integer matrix
// whose row blocks are read modulo the row slot's modulus p^{r-ht}. The
// entries of any structure-preserving map satisfy v_p(entry) >=
// ht(col slot) - ht(row slot), which makes composition well defined
// slot-modulus by slot-modulus.
struct TruncMat {
    std::vector<long> row_ht, col_ht; // heights of the matrix slots, expanded per coordinate
    std::vector<Int> row_mod;
    Mat<Int> m;

    bool operator==(const TruncMat& o) const { return m == o.m; }
};

class TruncatedModule {
public:
    TruncatedModule(const HighestWeightModule& mod, TruncationSpec spec)
        : mod_(mod), spec_(std::move(spec)) {
        long reach = std::min(spec_.r, mod.full_depth());
        if (mod.depth() < reach)
            throw std::invalid_argument("backing module not built deep enough for this truncation");
        for (std::size_t i = 0; i < mod.slots().size(); ++i) {
            const auto& s = mod.slots()[i];
            if (s.ht > spec_.r || s.lrank() == 0) continue;
            slots_.push_back({s.mu, s.gap, s.ht, s.lrank(), spec_.r - s.ht, i});
        }
        for (std::size_t i = 0; i + 1 < slots_.size(); ++i)
            if (slots_[i].ht > slots_[i + 1].ht)
                throw std::logic_error("truncation slots out of height order");
        for (const auto& s : slots_) {
            if (s.exponent == 0) continue;
            active_.push_back(&s - slots_.data());
        }
        offsets_.assign(active_.size() + 1, 0);
        for (std::size_t i = 0; i < active_.size(); ++i)
            offsets_[i + 1] = offsets_[i] + slots_[active_[i]].rank;
    }

    const HighestWeightModule& module() const { return mod_; }
    const TruncationSpec& spec() const { return spec_; }
    const std::vector<TruncSlot>& slots() const { return slots_; }

    Int cardinality_exponent() const {
        Int e = 0;
        for (const auto& s : slots_) e += Int(s.rank) * s.exponent;
        return e;
    }

    std::size_t group_rank() const { return offsets_.back(); }

    // slots that carry a nontrivial cyclic factor, i.e. exponent >= 1
    const std::vector<std::size_t>& active_slots() const { return active_; }

    TruncMat zero_map() const {
        TruncMat t;
        std::size_t n = group_rank();
        t.m = Mat<Int>(n, n);
        t.row_ht.resize(n);
        t.col_ht.resize(n);
        t.row_mod.resize(n);
        for (std::size_t i = 0; i < active_.size(); ++i) {
            const auto& s = slots_[active_[i]];
            for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) {
                t.row_ht[j] = t.col_ht[j] = s.ht;
                t.row_mod[j] = ipow(spec_.p, s.exponent);
            }
        }
        return t;
    }

    TruncMat identity_map() const {
        TruncMat t = zero_map();
        for (std::size_t i = 0; i < t.m.rows; ++i) t.m(i, i) = 1;
        return t;
    }

    // Induced matrix of a scaled generator; the pre-reduction integer
    // entries are asserted to respect the scaled-lattice divisibility, so
    // failure here means the sublattice is not preserved.
    TruncMat s_generator_action(const SGen& g) const {
        TruncMat t = zero_map();
        Generator gen{g.positive ? Generator::E : Generator::F, g.alpha, g.n};
        Int scale = g.positive ? ipow(spec_.p, g.n * rs().pos[g.alpha].ht) : Int(1);
        for (std::size_t si = 0; si < active_.size(); ++si) {
            const auto& src = slots_[active_[si]];
            auto act = mod_.lattice_action(gen, src.module_slot);
            if (!act) continue;
            auto ti = trunc_index(act->first);
            if (!ti) continue; // lands past height r, where the quotient vanishes
            const auto& dst = slots_[*ti];
            if (dst.exponent == 0) continue;
            auto ai = active_position(*ti);
            for (std::size_t rr = 0; rr < dst.rank; ++rr)
                for (std::size_t cc = 0; cc < src.rank; ++cc) {
                    Int v = scale * act->second(rr, cc);
                    long need = dst.ht < src.ht ? src.ht - dst.ht : 0;
                    if (need > 0 && !divides_pow(spec_.p, need, v))
                        throw std::logic_error("scaled generator leaves the truncating sublattice");
                    t.m(offsets_[*ai] + rr, offsets_[si] + cc) =
                        mod_reduce(v, ipow(spec_.p, dst.exponent));
                }
        }
        return t;
    }

    // One level-group letter exp(t x_alpha) as its finite truncated series
    // sum_n t^n (action of x_alpha^(n)); positive letters require
    // v_p(t) >= ht(alpha), negative ones v_p(t) >= 0.
    TruncMat level_letter_action(bool positive, std::size_t alpha, const Rat& t) const {
        long need = positive ? rs().pos[alpha].ht : 0;
        if (t != 0 && vp_rat(t, spec_.p) < need)
            throw std::invalid_argument("letter parameter valuation too small for this root");
        TruncMat out = identity_map();
        Generator::Kind k = positive ? Generator::E : Generator::F;
        for (long n = 1; n <= spec_.r; ++n) {
            Rat tn = 1;
            for (long q = 0; q < n; ++q) tn *= t;
            if (tn == 0) break;
            for (std::size_t si = 0; si < active_.size(); ++si) {
                const auto& src = slots_[active_[si]];
                auto act = mod_.lattice_action(Generator{k, alpha, n}, src.module_slot);
                if (!act) continue;
                auto ti = trunc_index(act->first);
                if (!ti) continue;
                const auto& dst = slots_[*ti];
                if (dst.exponent == 0) continue;
                auto ai = active_position(*ti);
                Int pm = ipow(spec_.p, dst.exponent);
                for (std::size_t rr = 0; rr < dst.rank; ++rr)
                    for (std::size_t cc = 0; cc < src.rank; ++cc) {
                        if (act->second(rr, cc) == 0) continue;
                        Rat v = tn * Rat(act->second(rr, cc));
                        long needdiv = dst.ht < src.ht ? src.ht - dst.ht : 0;
                        if (vp_rat(v, spec_.p) < needdiv)
                            throw std::logic_error("letter action leaves the truncating sublattice");
                        Int& cell = out.m(offsets_[*ai] + rr, offsets_[si] + cc);
                        cell = mod_reduce(cell + rat_mod(v, pm, spec_.p), pm);
                    }
            }
        }
        return out;
    }

    TruncMat level_word_action(const std::vector<std::tuple<bool, std::size_t, Rat>>& word) const {
        TruncMat out = identity_map();
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            out = multiply(level_letter_action(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it)),
                           out);
        return out;
    }

    static TruncMat multiply(const TruncMat& a, const TruncMat& b) {
        if (a.m.cols != b.m.rows) throw std::invalid_argument("truncation map shape mismatch");
        TruncMat out;
        out.row_ht = a.row_ht;
        out.col_ht = b.col_ht;
        out.row_mod = a.row_mod;
        out.m = Mat<Int>(a.m.rows, b.m.cols);
        for (std::size_t i = 0; i < a.m.rows; ++i)
            for (std::size_t kk = 0; kk < a.m.cols; ++kk) {
                if (a.m(i, kk) == 0) continue;
                for (std::size_t j = 0; j < b.m.cols; ++j) {
                    if (b.m(kk, j) == 0) continue;
                    out.m(i, j) += a.m(i, kk) * b.m(kk, j);
                }
            }
        for (std::size_t i = 0; i < out.m.rows; ++i)
            for (std::size_t j = 0; j < out.m.cols; ++j)
                out.m(i, j) = mod_reduce(out.m(i, j), out.row_mod[i]);
        return out;
    }

private:
    const HighestWeightModule& mod_;
    TruncationSpec spec_;
    std::vector<TruncSlot> slots_;
    std::vector<std::size_t> active_;
    std::vector<std::size_t> offsets_;

    const RootSystem& rs() const { return mod_.root_system(); }

    std::optional<std::size_t> trunc_index(std::size_t module_slot) const {
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i].module_slot == module_slot) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> active_position(std::size_t trunc_slot) const {
        for (std::size_t i = 0; i < active_.size(); ++i)
            if (active_[i] == trunc_slot) return i;
        return std::nullopt;
    }
};

// Per-weight scaling exponents of the truncating sublattice: p^{r-ht} on
// the slots of height at most r, the full space (exponent 0) deeper.
struct ScaleEntry {
    std::vector<Int> mu;
    long ht;
    long exponent;
    std::size_t rank;
};

inline std::vector<ScaleEntry> truncating_submodule(const HighestWeightModule& mod,
                                                    const TruncationSpec& spec) {
    std::vector<ScaleEntry> out;
    for (const auto& s : mod.slots()) {
        if (s.lrank() == 0) continue;
        long e = s.ht <= spec.r ? spec.r - s.ht : 0;
        out.push_back({s.mu, s.ht, e, s.lrank()});
    }
    return out;
}

// Exhaustive sublattice-invariance sweep: every scaled generator with
// 1 <= n <= nmax maps the scaled lattice into itself. Entries with a
// nontrivial divisibility bound arise exactly where the height drops into
// the scaled range, so the sweep takes every built source slot for the
// scaled raising generators (targets of height <= r) and every source of
// height <= r for the rest; remaining entries only require integrality,
// which the lattice action asserts on construction. The backing module
// must be built to depth min(full, r + nmax * max root height) for the
// sweep to be exhaustive.
inline bool truncation_invariance(const HighestWeightModule& mod, const TruncationSpec& spec,
                                  long nmax) {
    const auto& rs = mod.root_system();
    long maxht = rs.pos.back().ht;
    long want = std::min(mod.full_depth(), spec.r + nmax * maxht);
    if (mod.depth() < want)
        throw std::invalid_argument("module too shallow for an exhaustive invariance sweep");
    auto scale_exp = [&](long ht) { return ht <= spec.r ? spec.r - ht : 0; };
    bool ok = true;
    for (std::size_t alpha = 0; alpha < rs.pos.size(); ++alpha) {
        for (long n = 1; n <= nmax; ++n) {
            for (int kind = 0; kind < 2; ++kind) {
                bool positive = kind == 1;
                Generator g{positive ? Generator::E : Generator::F, alpha, n};
                Int scale = positive ? ipow(spec.p, n * rs.pos[alpha].ht) : Int(1);
                for (std::size_t si = 0; si < mod.slots().size(); ++si) {
                    long a = mod.slots()[si].ht;
                    if (!positive && a > spec.r) continue;
                    auto act = mod.lattice_action(g, si);
                    if (!act) continue;
                    long b = mod.slots()[act->first].ht;
                    if (positive && a > spec.r && b > spec.r) continue;
                    long need = scale_exp(b) - scale_exp(a);
                    if (need < 0) need = 0;
                    for (const auto& v : act->second.a)
                        if (!divides_pow(spec.p, need, scale * v)) ok = false;
                }
            }
        }
    }
    return ok;
}

// The monomial-matching comparison map between truncations of two
// congruent highest weights: the divided-power presentation of each source
// basis vector is re-read in the target quotient. Built only when the
// three comparison hypotheses hold (checked unless enforce is disabled for
// negative controls): equal labels off the moved set, labels exceeding r
// on the moved set, and weight congruence modulo p^{ceil(p r/(p-1))}.
class PhiMap {
public:
    PhiMap(const TruncatedModule& src, const TruncatedModule& dst,
           const std::vector<std::size_t>& moved, bool enforce = true)
        : src_(src), dst_(dst) {
        const auto& lam = src.module().highest_weight();
        const auto& lam2 = dst.module().highest_weight();
        const auto& spec = src.spec();
        if (dst.spec().p != spec.p || dst.spec().r != spec.r)
            throw std::invalid_argument("comparison requires matching truncation parameters");
        std::vector<bool> inmoved(lam.size(), false);
        for (auto i : moved) inmoved.at(i) = true;
        std::string fail;
        for (std::size_t i = 0; i < lam.size(); ++i)
            if (!inmoved[i] && lam[i] != lam2[i])
                fail = "labels differ off the moved set";
        for (std::size_t i = 0; i < lam.size() && fail.empty(); ++i)
            if (inmoved[i] && (lam[i] <= spec.r || lam2[i] <= spec.r))
                fail = "moved label not greater than the truncation length";
        if (fail.empty() && !weight_congruent(lam, lam2, static_cast<long>(spec.p),
                                              spec.congruence_power()))
            fail = "weights not congruent to the required depth";
        if (!fail.empty()) {
            if (enforce) throw std::invalid_argument("comparison hypotheses violated: " + fail);
            violated_hypothesis_ = fail;
        }

        shapes_match_ = src.slots().size() == dst.slots().size();
        if (shapes_match_)
            for (std::size_t i = 0; i < src.slots().size(); ++i) {
                const auto& a = src.slots()[i];
                const auto& b = dst.slots()[i];
                if (a.gap != b.gap || a.ht != b.ht || a.rank != b.rank ||
                    a.exponent != b.exponent)
                    shapes_match_ = false;
            }
        if (!shapes_match_) {
            if (violated_hypothesis_.empty())
                throw std::logic_error("truncation shapes differ despite valid hypotheses");
            return;
        }

        map_ = dst.zero_map();
        iso_ = true;
        const auto& ms = src.module().slots();
        const auto& md = dst.module().slots();
        auto offs = offsets();
        for (std::size_t ai = 0; ai < src.active_slots().size(); ++ai) {
            const auto& ts = src.slots()[src.active_slots()[ai]];
            const auto& ss = ms[ts.module_slot];
            const auto& ds = md[dst.slots()[dst.active_slots()[ai]].module_slot];
            if (ss.basis_a != ds.basis_a)
                throw std::logic_error("monomial bases differ between congruent slots");
            Int pm = ipow(spec.p, ts.exponent);
            Mat<Int> block(ts.rank, ts.rank);
            for (std::size_t j = 0; j < ts.rank; ++j)
                for (std::size_t i = 0; i < ts.rank; ++i) {
                    Int v = 0;
                    for (std::size_t t = 0; t < ss.vdim(); ++t)
                        v += ds.proj(i, t) * ss.reps(t, j);
                    block(i, j) = mod_reduce(v, pm);
                    map_.m(offs[ai] + i, offs[ai] + j) = block(i, j);
                }
            Mat<Int> bp(ts.rank, ts.rank);
            for (std::size_t i = 0; i < ts.rank; ++i)
                for (std::size_t j = 0; j < ts.rank; ++j)
                    bp(i, j) = mod_reduce(block(i, j), spec.p);
            if (mod_reduce(det(bp), spec.p) == 0) iso_ = false;
        }
        if (!iso_ && violated_hypothesis_.empty())
            throw std::logic_error("comparison map fails to be invertible despite valid hypotheses");
    }

    const TruncMat& matrix() const { return map_; }
    bool shapes_match() const { return shapes_match_; }
    bool invertible() const { return iso_; }
    const std::string& violated_hypothesis() const { return violated_hypothesis_; }
    const TruncatedModule& source() const { return src_; }
    const TruncatedModule& target() const { return dst_; }

private:
    const TruncatedModule& src_;
    const TruncatedModule& dst_;
    TruncMat map_;
    bool shapes_match_ = false;
    bool iso_ = false;
    std::string violated_hypothesis_;

    std::vector<std::size_t> offsets() const {
        std::vector<std::size_t> offs(src_.active_slots().size() + 1, 0);
        for (std::size_t i = 0; i < src_.active_slots().size(); ++i)
            offs[i + 1] = offs[i] + src_.slots()[src_.active_slots()[i]].rank;
        return offs;
    }
};

struct ConstancyReport {
    bool shapes_match = false;
    bool invertible = false;
    struct Entry {
        std::string generator;
        bool pass;
    };
    std::vector<Entry> generators;
    bool verdict = false;
};

// Exhaustive equivariance of the comparison map over the scaled generator
// set: divided exponents below r, plus the exponent-r witnesses whose
// action must vanish on both sides.
inline ConstancyReport local_constancy_check(const PhiMap& phi) {
    ConstancyReport rep;
    rep.shapes_match = phi.shapes_match();
    rep.invertible = phi.invertible();
    if (!rep.shapes_match) return rep;
    const auto& rs = phi.source().module().root_system();
    long r = phi.source().spec().r;
    bool all = true;
    for (std::size_t alpha = 0; alpha < rs.pos.size(); ++alpha)
        for (int kind = 0; kind < 2; ++kind)
            for (long n = 1; n <= r; ++n) {
                SGen g{kind == 1, alpha, n};
                TruncMat a = phi.source().s_generator_action(g);
                TruncMat b = phi.target().s_generator_action(g);
                bool pass;
                if (n == r) {
                    bool za = true, zb = true;
                    for (const auto& v : a.m.a)
                        if (v != 0) za = false;
                    for (const auto& v : b.m.a)
                        if (v != 0) zb = false;
                    // f-type witnesses vanish because every target slot is
                    // deleted; the scaled raising witnesses because the
                    // scale is divisible by p^r
                    pass = za && zb;
                } else {
                    TruncMat lhs = TruncatedModule::multiply(phi.matrix(), a);
                    TruncMat rhs = TruncatedModule::multiply(b, phi.matrix());
                    pass = lhs == rhs;
                }
                rep.generators.push_back({sgen_name(rs, g), pass});
                if (!pass) all = false;
            }
    rep.verdict = all && rep.invertible;
    return rep;
}

} // namespace chevtrunc
