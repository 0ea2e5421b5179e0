#pragma once

// Integral highest weight modules: Verma weight spaces indexed by Kostant
// partitions, the maximal submodule spanned from the f^(m+1) singular
// vectors and saturated per weight, and the induced free lattice quotient
// with exact generator actions. Freudenthal multiplicities and the Weyl
// dimension formula are implemented separately (top-down, no lattice
// machinery) so they can serve as independent cross-checks, as is a direct
// Lie-recursion action that never touches the straightening engine.

#include "chevtrunc/pbw.hpp"

namespace chevtrunc {

// ---- closed-form multiplicity oracles --------------------------------------

inline std::vector<Int> anti_dominant(const RootSystem& rs, std::vector<Int> mu) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < rs.rank; ++i) {
            if (mu[i] > 0) {
                Int c = mu[i];
                for (int j = 0; j < rs.rank; ++j) mu[j] -= c * rs.cartan(j, i);
                changed = true;
            }
        }
    }
    return mu;
}

inline Int weyl_dimension(const RootSystem& rs, const std::vector<Int>& lambda) {
    std::vector<Int> rho(rs.rank, 1), lr(rs.rank);
    for (int i = 0; i < rs.rank; ++i) {
        if (lambda[i] < 0) throw std::invalid_argument("weyl_dimension: non-dominant weight");
        lr[i] = lambda[i] + 1;
    }
    Rat num = 1, den = 1;
    for (const auto& r : rs.pos) {
        auto c = rat_coords(r.c);
        num *= pair_weight_root(rs, lr, c);
        den *= pair_weight_root(rs, rho, c);
    }
    return to_int(num / den);
}

// Weight multiplicities of the irreducible module, computed top-down to a
// relative-height cutoff. Keys are gap vectors: lambda - mu in simple-root
// coordinates.
class FreudenthalTable {
public:
    FreudenthalTable(const RootSystem& rs, std::vector<Int> lambda, long depth)
        : rs_(rs), lambda_(std::move(lambda)) {
        std::vector<Rat> lr(rs_.rank);
        std::vector<Int> lrho(rs_.rank);
        for (int i = 0; i < rs_.rank; ++i) lrho[i] = lambda_[i] + 1;
        auto lrho_c = root_coordinates(rs_, lrho);
        Rat top = pair_weight_root(rs_, lrho, lrho_c);

        std::vector<long> zero(rs_.rank, 0);
        mult_[zero] = 1;
        for (long h = 1; h <= depth; ++h) {
            std::vector<std::vector<long>> gaps;
            enumerate_gaps(h, gaps);
            for (const auto& g : gaps) {
                Rat rhs = 0;
                for (const auto& r : rs_.pos) {
                    for (long j = 1;; ++j) {
                        std::vector<long> g2(rs_.rank);
                        bool ok = true;
                        for (int i = 0; i < rs_.rank; ++i) {
                            g2[i] = g[i] - j * r.c[i];
                            if (g2[i] < 0) ok = false;
                        }
                        if (!ok) break;
                        auto it = mult_.find(g2);
                        if (it == mult_.end() || it->second == 0) continue;
                        // (mu + j alpha, alpha) with mu = lambda - g2... the
                        // summand weight is mu' = lambda - g; mu' + j alpha
                        // corresponds to gap g2
                        std::vector<Int> w(rs_.rank);
                        for (int i = 0; i < rs_.rank; ++i) {
                            Int s = lambda_[i];
                            for (int t = 0; t < rs_.rank; ++t) s -= rs_.cartan(i, t) * g2[t];
                            w[i] = s;
                        }
                        rhs += Rat(it->second) * pair_weight_root(rs_, w, rat_coords(r.c));
                    }
                }
                std::vector<Int> murho(rs_.rank);
                for (int i = 0; i < rs_.rank; ++i) {
                    Int s = lambda_[i] + 1;
                    for (int t = 0; t < rs_.rank; ++t) s -= rs_.cartan(i, t) * g[t];
                    murho[i] = s;
                }
                Rat denom = top - pair_weight_root(rs_, murho, root_coordinates(rs_, murho));
                if (denom == 0) {
                    // mu + rho lies on the shifted orbit sphere, so mu is not
                    // a weight; the recursion identity forces the sum to
                    // vanish as well
                    if (rhs != 0) throw std::logic_error("multiplicity recursion inconsistency");
                    mult_[g] = 0;
                    continue;
                }
                mult_[g] = to_int(2 * rhs / denom);
            }
        }
    }

    Int multiplicity(const std::vector<long>& gap) const {
        auto it = mult_.find(gap);
        return it == mult_.end() ? Int(0) : it->second;
    }

    const std::map<std::vector<long>, Int>& table() const { return mult_; }

private:
    const RootSystem& rs_;
    std::vector<Int> lambda_;
    std::map<std::vector<long>, Int> mult_;

    void enumerate_gaps(long h, std::vector<std::vector<long>>& out) const {
        std::vector<long> cur(rs_.rank, 0);
        rec(0, h, cur, out);
    }
    void rec(int i, long rem, std::vector<long>& cur, std::vector<std::vector<long>>& out) const {
        if (i == rs_.rank - 1) {
            cur[i] = rem;
            out.push_back(cur);
            return;
        }
        for (long v = 0; v <= rem; ++v) {
            cur[i] = v;
            rec(i + 1, rem - v, cur, out);
        }
    }
};

// ---- Kostant partitions -----------------------------------------------------

// All exponent vectors a (over the positive roots, fixed order) with
// sum a_i alpha_i equal to the gap; emitted in ascending lexicographic order.
inline std::vector<std::vector<long>> kostant_partitions(const RootSystem& rs,
                                                         const std::vector<long>& gap) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur(rs.pos.size(), 0);
    std::function<void(std::size_t, std::vector<long>)> rec =
        [&](std::size_t k, std::vector<long> rem) {
            if (k == rs.pos.size()) {
                for (long v : rem)
                    if (v != 0) return;
                out.push_back(cur);
                return;
            }
            long cap = -1; // max exponent for root k given the remainder
            for (int i = 0; i < rs.rank; ++i) {
                if (rs.pos[k].c[i] == 0) continue;
                long q = rem[i] / rs.pos[k].c[i];
                cap = (cap < 0) ? q : std::min(cap, q);
            }
            if (cap < 0) cap = 0; // zero root impossible; defensive
            for (long v = 0; v <= cap; ++v) {
                cur[k] = v;
                auto r2 = rem;
                bool ok = true;
                for (int i = 0; i < rs.rank; ++i) {
                    r2[i] -= v * rs.pos[k].c[i];
                    if (r2[i] < 0) ok = false;
                }
                if (ok) rec(k + 1, r2);
                cur[k] = 0;
            }
        };
    std::vector<long> rem = gap;
    rec(0, rem);
    return out;
}

// ---- generators -------------------------------------------------------------

// A divided generator power of the integral form: f_alpha^(n) or
// e_alpha^(n) (alpha indexes rs.pos) or a simple coroot h_i.
struct Generator {
    enum Kind { F, E, H } kind;
    std::size_t idx;
    long n;
};

// ---- the integral module ----------------------------------------------------

struct WeightSlot {
    std::vector<Int> mu;                      // fundamental coordinates
    std::vector<long> gap;                    // lambda - mu in root coordinates
    long ht = 0;
    std::vector<std::vector<long>> basis_a;   // Verma monomial basis (partitions)
    std::map<std::vector<long>, std::size_t> mono_index;
    Mat<Int> u_raw;                           // unsaturated span of the singular-vector submodule
    Mat<Int> u_basis;                         // saturated basis columns
    bool raw_was_saturated = true;
    Mat<Int> reps;                            // lattice-quotient representatives (columns)
    Mat<Int> proj;                            // quotient coordinates of a monomial vector
    std::size_t vdim() const { return basis_a.size(); }
    std::size_t lrank() const { return reps.cols; }
};

class HighestWeightModule {
public:
    HighestWeightModule(StraighteningEngine& eng, std::vector<Int> lambda, long cutoff = -1,
                        Int dim_cap = 3000)
        : eng_(eng), rs_(eng.algebra().rs), lambda_(std::move(lambda)) {
        for (auto& l : lambda_)
            if (l < 0) throw std::invalid_argument("highest weight must be dominant");
        auto low = anti_dominant(rs_, lambda_);
        full_depth_ = static_cast<long>(relative_height(rs_, lambda_, low));
        if (cutoff < 0) {
            depth_ = full_depth_;
            if (weyl_dimension(rs_, lambda_) > dim_cap)
                throw std::invalid_argument("module dimension exceeds the cap; pass a depth cutoff");
        } else {
            depth_ = std::min(cutoff, full_depth_);
        }
        build();
    }

    const RootSystem& root_system() const { return rs_; }
    const std::vector<Int>& highest_weight() const { return lambda_; }
    long depth() const { return depth_; }
    long full_depth() const { return full_depth_; }
    const std::vector<WeightSlot>& slots() const { return slots_; }

    std::optional<std::size_t> slot_of(const std::vector<long>& gap) const {
        auto it = slot_index_.find(gap);
        if (it == slot_index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t total_rank() const {
        std::size_t n = 0;
        for (const auto& s : slots_) n += s.lrank();
        return n;
    }

    // Gap of the image weight under a generator; nullopt when it leaves the
    // cone of module weights.
    std::optional<std::vector<long>> image_gap(const Generator& g, const std::vector<long>& gap) const {
        if (g.kind == Generator::H) return gap;
        std::vector<long> t(rs_.rank);
        for (int i = 0; i < rs_.rank; ++i) {
            long d = g.n * rs_.pos[g.idx].c[i];
            t[i] = g.kind == Generator::F ? gap[i] + d : gap[i] - d;
            if (t[i] < 0) return std::nullopt;
        }
        return t;
    }

    // Action of a generator on one Verma basis monomial, as target-slot
    // monomial coordinates. Integrality is asserted: divided powers of the
    // Chevalley generators preserve the monomial lattice.
    std::vector<Int> verma_action_on_monomial(const Generator& g, std::size_t slot,
                                              std::size_t mono) const {
        const WeightSlot& src = slots_[slot];
        auto tgap = image_gap(g, src.gap);
        if (!tgap) return {};
        auto tslot = slot_of(*tgap);
        if (!tslot) return {}; // beyond the cutoff
        const WeightSlot& dst = slots_[*tslot];
        std::vector<Int> out(dst.vdim(), 0);
        const auto& a = src.basis_a[mono];

        if (g.kind == Generator::H) {
            out[mono] = src.mu[g.idx];
            return out;
        }
        Word w;
        if (g.kind == Generator::F) w.push_back({eng_.code_neg(g.idx), g.n});
        else w.push_back({eng_.code_pos(g.idx), g.n});
        for (std::size_t i = 0; i < rs_.pos.size(); ++i)
            if (a[i] > 0) w.push_back({eng_.code_neg(i), a[i]});
        auto targets = eng_.apply_to_highest(eng_.straighten(w), lambda_);
        for (const auto& [fv, c] : targets) {
            auto it = dst.mono_index.find(fv);
            if (it == dst.mono_index.end())
                throw std::logic_error("generator action left the expected weight space");
            out[it->second] = to_int(c);
        }
        return out;
    }

    // Matrix of the generator from one slot's lattice to the target slot's,
    // in the quotient bases. Second member of the pair is the target slot.
    std::optional<std::pair<std::size_t, Mat<Int>>> lattice_action(const Generator& g,
                                                                   std::size_t slot) const {
        const WeightSlot& src = slots_[slot];
        auto tgap = image_gap(g, src.gap);
        if (!tgap) {
            // the zero map into the highest direction; report as absent
            return std::nullopt;
        }
        auto ts = slot_of(*tgap);
        if (!ts) return std::nullopt;
        const WeightSlot& dst = slots_[*ts];
        Mat<Int> m(dst.lrank(), src.lrank());
        for (std::size_t j = 0; j < src.lrank(); ++j) {
            std::vector<Int> img(dst.vdim(), 0);
            for (std::size_t i = 0; i < src.vdim(); ++i) {
                if (src.reps(i, j) == 0) continue;
                auto col = verma_action_on_monomial(g, slot, i);
                for (std::size_t t = 0; t < dst.vdim(); ++t) img[t] += src.reps(i, j) * col[t];
            }
            for (std::size_t t = 0; t < dst.lrank(); ++t) {
                Int v = 0;
                for (std::size_t u = 0; u < dst.vdim(); ++u) v += dst.proj(t, u) * img[u];
                m(t, j) = v;
            }
        }
        return std::make_pair(*ts, m);
    }

    // One-parameter unipotent generator matrix x_alpha(t) on the direct sum
    // of the built lattice slots, block-unipotent by height; the height
    // grading proves det = 1 structurally and the blocks are asserted.
    Mat<Rat> one_parameter_matrix(bool positive, std::size_t alpha, const Rat& t) const {
        std::vector<std::size_t> offs = offsets();
        std::size_t n = total_rank();
        Mat<Rat> m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        long hta = rs_.pos[alpha].ht;
        for (long k = 1; k * hta <= depth_; ++k) {
            Generator g{positive ? Generator::E : Generator::F, alpha, k};
            Rat tk = 1;
            for (long j = 0; j < k; ++j) tk *= t;
            for (std::size_t s = 0; s < slots_.size(); ++s) {
                auto act = lattice_action(g, s);
                if (!act) continue;
                auto& [ts, mat] = *act;
                if (mat.rows == 0 || mat.cols == 0) continue;
                for (std::size_t r = 0; r < mat.rows; ++r)
                    for (std::size_t c = 0; c < mat.cols; ++c)
                        if (mat(r, c) != 0) m(offs[ts] + r, offs[s] + c) += tk * Rat(mat(r, c));
            }
        }
        return m;
    }

    std::vector<std::size_t> offsets() const {
        std::vector<std::size_t> offs(slots_.size() + 1, 0);
        for (std::size_t i = 0; i < slots_.size(); ++i) offs[i + 1] = offs[i] + slots_[i].lrank();
        return offs;
    }

    // Index in the weight lattice of the subgroup generated by the weights
    // of this module (finite when the weights span a full-rank sublattice).
    Int weight_lattice_index() const {
        std::vector<std::vector<Int>> ws;
        for (const auto& s : slots_)
            if (s.lrank() > 0) ws.push_back(s.mu);
        Mat<Int> m(rs_.rank, ws.size());
        for (std::size_t j = 0; j < ws.size(); ++j)
            for (int i = 0; i < rs_.rank; ++i) m(i, j) = ws[j][i];
        Mat<Int> h = hnf_cols(m);
        if (h.cols != static_cast<std::size_t>(rs_.rank))
            throw std::logic_error("weight_lattice_index: weights do not span a finite-index subgroup");
        return cokernel_cardinality(h);
    }

    StraighteningEngine& engine() const { return eng_; }

private:
    StraighteningEngine& eng_;
    const RootSystem& rs_;
    std::vector<Int> lambda_;
    long depth_ = 0, full_depth_ = 0;
    std::vector<WeightSlot> slots_;
    std::map<std::vector<long>, std::size_t> slot_index_;

    void build() {
        for (long h = 0; h <= depth_; ++h) {
            std::vector<std::vector<long>> gaps;
            std::vector<long> cur(rs_.rank, 0);
            std::function<void(int, long)> rec = [&](int i, long rem) {
                if (i == rs_.rank - 1) {
                    cur[i] = rem;
                    gaps.push_back(cur);
                    return;
                }
                for (long v = 0; v <= rem; ++v) {
                    cur[i] = v;
                    rec(i + 1, rem - v);
                }
            };
            rec(0, h);
            for (const auto& g : gaps) {
                WeightSlot s;
                s.gap = g;
                s.ht = h;
                s.mu.resize(rs_.rank);
                for (int i = 0; i < rs_.rank; ++i) {
                    Int v = lambda_[i];
                    for (int t = 0; t < rs_.rank; ++t) v -= rs_.cartan(i, t) * g[t];
                    s.mu[i] = v;
                }
                s.basis_a = kostant_partitions(rs_, g);
                if (s.basis_a.empty()) continue;
                for (std::size_t i = 0; i < s.basis_a.size(); ++i) s.mono_index[s.basis_a[i]] = i;
                slots_.push_back(std::move(s));
                slot_index_[g] = slots_.size() - 1;
            }
        }
        for (auto& s : slots_) build_quotient(s);
    }

    void build_quotient(WeightSlot& s) {
        std::size_t n = s.vdim();
        // span of the maximal submodule at this weight: straightened
        // X_-^(a) f_i^(lambda_i + 1) applied to the highest vector
        std::vector<std::vector<Int>> cols;
        for (int i = 0; i < rs_.rank; ++i) {
            std::vector<long> e(rs_.rank, 0);
            e[i] = 1;
            auto sr = rs_.find_positive(e);
            if (!sr) throw std::logic_error("simple root missing");
            long nexp = static_cast<long>(lambda_[i]) + 1;
            std::vector<long> srcgap(rs_.rank);
            bool ok = true;
            for (int t = 0; t < rs_.rank; ++t) {
                srcgap[t] = s.gap[t] - nexp * e[t];
                if (srcgap[t] < 0) ok = false;
            }
            if (!ok) continue;
            for (const auto& a : kostant_partitions(rs_, srcgap)) {
                Word w;
                for (std::size_t t = 0; t < rs_.pos.size(); ++t)
                    if (a[t] > 0) w.push_back({eng_.code_neg(t), a[t]});
                w.push_back({eng_.code_neg(*sr), nexp});
                auto res = eng_.apply_to_highest(eng_.straighten(w), lambda_);
                std::vector<Int> col(n, 0);
                for (const auto& [fv, c] : res) {
                    auto it = s.mono_index.find(fv);
                    if (it == s.mono_index.end())
                        throw std::logic_error("singular vector left its weight space");
                    col[it->second] = to_int(c);
                }
                cols.push_back(std::move(col));
            }
        }
        s.u_raw = Mat<Int>(n, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) s.u_raw(i, j) = cols[j][i];
        s.raw_was_saturated = cols.empty() ? true : columns_saturated(s.u_raw);
        s.u_basis = cols.empty() ? Mat<Int>(n, 0) : saturate_columns(s.u_raw);
        std::size_t k = s.u_basis.cols;

        // complement: prefer standard basis vectors (keeps quotient
        // coordinates monomial-aligned), fall back to the Smith complement
        std::vector<std::size_t> picked;
        for (std::size_t i = 0; i < n && picked.size() + k < n; ++i) {
            Mat<Int> cand(n, k + picked.size() + 1);
            for (std::size_t c2 = 0; c2 < k; ++c2)
                for (std::size_t t = 0; t < n; ++t) cand(t, c2) = s.u_basis(t, c2);
            for (std::size_t p = 0; p < picked.size(); ++p) cand(picked[p], k + p) = 1;
            cand(i, k + picked.size()) = 1;
            if (rank(mat_cast<Rat>(cand)) == k + picked.size() + 1) picked.push_back(i);
        }
        bool coordinate_complement = picked.size() + k == n;
        Mat<Int> C(n, n - k);
        if (coordinate_complement) {
            Mat<Int> full(n, n);
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < n; ++i) full(i, j) = s.u_basis(i, j);
            for (std::size_t j = 0; j < picked.size(); ++j) full(picked[j], k + j) = 1;
            if (abs(det(full)) == 1) {
                for (std::size_t j = 0; j < picked.size(); ++j) C(picked[j], j) = 1;
            } else {
                coordinate_complement = false;
            }
        }
        if (!coordinate_complement) {
            Snf sf = snf(s.u_basis);
            // complement = uinv columns beyond the rank
            for (std::size_t j = k; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) C(i, j - k) = sf.uinv(i, j);
        }
        s.reps = C;
        // projector: bottom rows of the inverse of [u_basis | C]
        Mat<Int> full(n, n);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i) full(i, j) = s.u_basis(i, j);
        for (std::size_t j = 0; j < n - k; ++j)
            for (std::size_t i = 0; i < n; ++i) full(i, k + j) = C(i, j);
        Mat<Rat> aug(n, 2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) aug(i, j) = Rat(full(i, j));
            aug(i, n + i) = 1;
        }
        Rref e = rref(std::move(aug));
        for (std::size_t i = 0; i < n; ++i)
            if (e.pivot_cols.size() <= i || e.pivot_cols[i] != i)
                throw std::logic_error("quotient basis is singular");
        s.proj = Mat<Int>(n - k, n);
        for (std::size_t i = 0; i < n - k; ++i)
            for (std::size_t j = 0; j < n; ++j) s.proj(i, j) = to_int(e.r(k + i, n + j));
    }
};

// ---- straightening-free module action (oracle) ------------------------------

// Acts on Verma monomials written with ordinary powers, by the bare Lie
// recursion g f w v = f (g w v) + [g, f] w v. Shares nothing with the
// straightening engine except the verified bracket table.
class DirectVermaAction {
public:
    DirectVermaAction(const ChevalleyAlgebra& g, std::vector<Int> lambda)
        : g_(g), lambda_(std::move(lambda)) {}

    using Vec = std::map<std::vector<long>, Rat>;

    // g acting on the ordered ordinary-power monomial f^a v_lambda. Left
    // multiplication by f_j on an already-ordered monomial is itself a
    // recursive case: it is a direct prepend only when j does not exceed
    // the monomial's leading letter.
    Vec act(int kind, std::size_t idx, const std::vector<long>& a) {
        auto key = std::make_tuple(kind, idx, a);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Vec out;
        std::size_t j = 0;
        while (j < a.size() && a[j] == 0) ++j;
        if (kind == 0 && idx <= j) {
            auto m = a;
            m[idx] += 1;
            out[m] = 1;
        } else if (j == a.size()) {
            if (kind == 1) out[a] = Rat(lambda_[idx]);
            // kind == 2 annihilates the highest vector
        } else {
            auto rest = a;
            rest[j] -= 1;
            // g f_j (rest) = f_j (g rest) + [g, f_j] rest
            for (const auto& [m, c] : act(kind, idx, rest))
                for (const auto& [m2, c2] : act(0, j, m)) add(out, m2, c * c2);
            for (const auto& t : g_.bracket(kind, idx, 0, j)) {
                for (const auto& [m, c] : act(t.kind, t.idx, rest)) add(out, m, c * t.coeff);
            }
        }
        memo_.emplace(key, out);
        return out;
    }

    // Matrix of a single Chevalley generator between ordinary-power
    // monomial bases of two weight spaces.
    Mat<Rat> matrix(int kind, std::size_t idx, const std::vector<std::vector<long>>& src,
                    const std::vector<std::vector<long>>& dst) {
        std::map<std::vector<long>, std::size_t> di;
        for (std::size_t i = 0; i < dst.size(); ++i) di[dst[i]] = i;
        Mat<Rat> m(dst.size(), src.size());
        for (std::size_t j = 0; j < src.size(); ++j)
            for (const auto& [mono, c] : act(kind, idx, src[j])) {
                auto it = di.find(mono);
                if (it == di.end()) throw std::logic_error("oracle action left the expected space");
                m(it->second, j) = c;
            }
        return m;
    }

private:
    const ChevalleyAlgebra& g_;
    std::vector<Int> lambda_;
    std::map<std::tuple<int, std::size_t, std::vector<long>>, Vec> memo_;

    static void add(Vec& v, const std::vector<long>& m, const Rat& c) {
        if (c == 0) return;
        auto it = v.find(m);
        if (it == v.end()) v.emplace(m, c);
        else {
            it->second += c;
            if (it->second == 0) v.erase(it);
        }
    }
};

} // namespace chevtrunc
