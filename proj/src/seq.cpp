#include "forge/seq.hpp"

#include <algorithm>

namespace forge {

std::string Report::text() const {
    if (findings.empty()) return "ok\n";
    std::string out;
    for (auto& f : findings) {
        out += "FAIL " + f.check + " at " + f.location;
        if (!f.detail.empty()) out += ": " + f.detail;
        out += '\n';
    }
    return out;
}

const GroundObject& SymSeq::level(int n) const {
    if (n < 0 || n > N) throw TruncationError("level " + std::to_string(n) + " above truncation " + std::to_string(N));
    return levels[n];
}

const GroundObject& LamSeq::level(int n) const {
    if (n < 0 || n > N) throw TruncationError("level " + std::to_string(n) + " above truncation " + std::to_string(N));
    return levels[n];
}

SymSeq LamSeq::to_sym() const {
    return SymSeq{tag, N, levels, trans};
}

bool seq_equal(const SymSeq& a, const SymSeq& b) {
    return a.tag == b.tag && a.N == b.N && a.levels == b.levels && a.trans == b.trans;
}

bool seq_equal(const LamSeq& a, const LamSeq& b) {
    return a.tag == b.tag && a.N == b.N && a.levels == b.levels && a.trans == b.trans &&
           a.deg == b.deg && a.base == b.base;
}

static GroundMorphism act_perm_impl(const std::vector<GroundObject>& levels,
                                    const std::vector<std::vector<GroundMorphism>>& trans, int n,
                                    const BasedInjection& sigma) {
    if (!sigma.is_permutation() || sigma.n != n) throw GroundError("act_perm: bad permutation");
    GroundMorphism out = identity_morphism(levels[n]);
    // contravariant: act(s_{w0} o ... o s_{wr}) = act(s_{wr}) o ... o act(s_{w0})
    for (int i : adjacent_word(sigma)) out = compose(trans[n][i - 1], out);
    return out;
}

GroundMorphism act_perm(const SymSeq& s, int n, const BasedInjection& sigma) {
    s.level(n);
    return act_perm_impl(s.levels, s.trans, n, sigma);
}

GroundMorphism act_perm(const LamSeq& s, int n, const BasedInjection& sigma) {
    s.level(n);
    return act_perm_impl(s.levels, s.trans, n, sigma);
}

GroundMorphism act(const LamSeq& s, const BasedInjection& lambda) {
    s.level(lambda.n);
    if (s.cache) {
        std::scoped_lock lk(s.cache->mu);
        auto it = s.cache->memo.find({lambda.n, inj_key(lambda)});
        if (it != s.cache->memo.end()) return it->second;
    }
    // canonical factorization lambda = rho o o with rho the minimal completing
    // permutation and o the top-skipping ordered injection m -> n
    BasedInjection rho = complete_to_perm(lambda);
    GroundMorphism out = act_perm(s, lambda.n, rho);
    for (int l = lambda.n; l > lambda.m; --l) out = compose(s.deg[l][l - 1], out);
    if (s.cache) {
        std::scoped_lock lk(s.cache->mu);
        s.cache->memo.emplace(std::make_pair(lambda.n, inj_key(lambda)), out);
    }
    return out;
}

void enable_act_cache(LamSeq& s) {
    if (!s.cache) s.cache = std::make_shared<ActCache>();
}

namespace {

void check_shapes(Report& rep, GroundTag tag, int N, const std::vector<GroundObject>& levels,
                  const std::vector<std::vector<GroundMorphism>>& trans) {
    if (static_cast<int>(levels.size()) != N + 1) {
        rep.add("shape", "levels", "expected " + std::to_string(N + 1) + " levels");
        return;
    }
    for (int n = 0; n <= N; ++n)
        if (levels[n].tag != tag) rep.add("shape", "level " + std::to_string(n), "tag mismatch");
    if (static_cast<int>(trans.size()) != N + 1) {
        rep.add("shape", "trans", "expected per-level transposition tables");
        return;
    }
    for (int n = 0; n <= N; ++n) {
        int want = std::max(0, n - 1);
        if (static_cast<int>(trans[n].size()) != want) {
            rep.add("shape", "trans " + std::to_string(n), "expected " + std::to_string(want) + " generators");
            continue;
        }
        for (int i = 1; i < n; ++i) {
            const GroundMorphism& t = trans[n][i - 1];
            if (!(t.source == levels[n]) || !(t.target == levels[n]))
                rep.add("shape", "s_" + std::to_string(i) + " level " + std::to_string(n),
                        "endomorphism of the level object expected");
        }
    }
}

void check_coxeter(Report& rep, const std::vector<GroundObject>& levels,
                   const std::vector<std::vector<GroundMorphism>>& trans, int N) {
    for (int n = 2; n <= N; ++n) {
        GroundMorphism id = identity_morphism(levels[n]);
        for (int i = 1; i < n; ++i) {
            const GroundMorphism& si = trans[n][i - 1];
            if (!(compose(si, si) == id))
                rep.add("involution", "s_" + std::to_string(i) + " level " + std::to_string(n),
                        "s_i^2 != id");
            for (int j = i + 2; j < n; ++j) {
                const GroundMorphism& sj = trans[n][j - 1];
                if (!(compose(si, sj) == compose(sj, si)))
                    rep.add("commutation",
                            "s_" + std::to_string(i) + ",s_" + std::to_string(j) + " level " + std::to_string(n),
                            "distant generators do not commute");
            }
            if (i + 1 < n) {
                const GroundMorphism& sj = trans[n][i];
                GroundMorphism lhs = compose(si, compose(sj, si));
                GroundMorphism rhs = compose(sj, compose(si, sj));
                if (!(lhs == rhs))
                    rep.add("braid", "s_" + std::to_string(i) + ",s_" + std::to_string(i + 1) +
                                         " level " + std::to_string(n),
                            "braid relation fails");
            }
        }
    }
}

}  // namespace

Report validate(const SymSeq& s) {
    Report rep;
    check_shapes(rep, s.tag, s.N, s.levels, s.trans);
    if (!rep.ok()) return rep;
    check_coxeter(rep, s.levels, s.trans, s.N);
    return rep;
}

Report validate(const LamSeq& s) {
    Report rep;
    check_shapes(rep, s.tag, s.N, s.levels, s.trans);
    if (!rep.ok()) return rep;
    if (static_cast<int>(s.deg.size()) != s.N + 1) {
        rep.add("shape", "deg", "expected per-level degeneracy tables");
        return rep;
    }
    for (int n = 1; n <= s.N; ++n) {
        if (static_cast<int>(s.deg[n].size()) != n) {
            rep.add("shape", "deg " + std::to_string(n), "expected " + std::to_string(n) + " degeneracies");
            return rep;
        }
        for (int i = 1; i <= n; ++i) {
            const GroundMorphism& d = s.deg[n][i - 1];
            if (!(d.source == s.levels[n]) || !(d.target == s.levels[n - 1]))
                rep.add("shape", "deg_" + std::to_string(i) + " level " + std::to_string(n),
                        "morphism level n -> n-1 expected");
        }
    }
    if (!(s.base.source == unit_object(s.tag)) || !(s.base.target == s.levels[0]))
        rep.add("shape", "base", "base map I -> level 0 expected");
    if (!rep.ok()) return rep;

    check_coxeter(rep, s.levels, s.trans, s.N);

    // exhaustive functoriality: act(g o f) = act(f) o act(g) over all composable
    // pairs of based injections at levels <= N
    for (int p = 0; p <= s.N; ++p)
        for (int n = 0; n <= p; ++n) {
            auto gs = enumerate_injections(n, p);
            for (int m = 0; m <= n; ++m) {
                auto fs = enumerate_injections(m, n);
                for (auto& g : gs)
                    for (auto& f : fs) {
                        GroundMorphism lhs = act(s, compose(g, f));
                        GroundMorphism rhs = compose(act(s, f), act(s, g));
                        if (!(lhs == rhs)) {
                            rep.add("functoriality",
                                    "g=" + inj_key(g) + ", f=" + inj_key(f),
                                    "act(g o f) != act(f) o act(g)");
                            if (rep.findings.size() > 20) return rep;
                        }
                    }
            }
        }
    return rep;
}

LamSeq I0(GroundTag tag, int N) {
    LamSeq d;
    d.tag = tag;
    d.N = N;
    d.levels.assign(N + 1, initial_object(tag));
    d.levels[0] = unit_object(tag);
    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int n = 1; n <= N; ++n) {
        for (int i = 1; i < n; ++i) d.trans[n].push_back(identity_morphism(d.levels[n]));
        for (int i = 1; i <= n; ++i)
            d.deg[n].push_back(from_label_fn(d.levels[n], d.levels[n - 1],
                                             [](const std::string& l) { return l; }));
    }
    d.base = identity_morphism(unit_object(tag));
    enable_act_cache(d);
    return d;
}

LamSeq I1(GroundTag tag, int N) {
    LamSeq d = I0(tag, N);
    d.levels[1] = unit_object(tag);
    d.deg[1][0] = identity_morphism(unit_object(tag));
    if (N >= 2) {
        // levels >= 2 stay initial; degeneracies out of them are empty maps
        d.deg[2].clear();
        for (int i = 1; i <= 2; ++i)
            d.deg[2].push_back(GroundMorphism{tag, d.levels[2], d.levels[1],
                                              {}, Matrix(d.levels[1].size(), 0)});
    }
    enable_act_cache(d);
    return d;
}

LamSeq embed(const BasedObject& x, EmbedMode mode, int N) {
    GroundTag tag = x.carrier.tag;
    LamSeq d = I0(tag, N);
    d.levels[0] = x.carrier;
    d.base = x.base;
    if (mode == EmbedMode::i1) {
        d.levels[1] = x.carrier;
        d.deg[1][0] = identity_morphism(x.carrier);
    }
    // rebuild empty degeneracies with correct shapes
    for (int n = 1; n <= N; ++n) {
        d.deg[n].clear();
        for (int i = 1; i <= n; ++i) {
            if (d.levels[n] == d.levels[n - 1] && n == 1 && mode == EmbedMode::i1) {
                d.deg[n].push_back(identity_morphism(x.carrier));
            } else if (d.levels[n].size() == 0) {
                d.deg[n].push_back(GroundMorphism{tag, d.levels[n], d.levels[n - 1],
                                                  {}, Matrix(d.levels[n - 1].size(), 0)});
            } else {
                d.deg[n].push_back(from_label_fn(d.levels[n], d.levels[n - 1],
                                                 [](const std::string& l) { return l; }));
            }
        }
    }
    d.cache.reset();
    enable_act_cache(d);
    return d;
}

BasedObject p0(const LamSeq& d) {
    return BasedObject{d.levels[0], d.base};
}

bool is_unital(const LamSeq& d) {
    return is_isomorphism(d.base);
}

LamSeq re_truncate(const LamSeq& d, int new_N) {
    if (new_N > d.N) throw TruncationError("re_truncate: cannot extend truncation");
    LamSeq out = d;
    out.N = new_N;
    out.levels.resize(new_N + 1);
    out.trans.resize(new_N + 1);
    out.deg.resize(new_N + 1);
    out.cache.reset();
    enable_act_cache(out);
    return out;
}

LamSeq extend_by_initial(const LamSeq& d, int new_N) {
    if (new_N < d.N) throw TruncationError("extend_by_initial: cannot shrink");
    LamSeq out = d;
    out.N = new_N;
    for (int n = d.N + 1; n <= new_N; ++n) {
        GroundObject empty = initial_object(d.tag);
        out.levels.push_back(empty);
        out.trans.push_back({});
        out.deg.push_back({});
        for (int i = 1; i < n; ++i) out.trans[n].push_back(identity_morphism(empty));
        for (int i = 1; i <= n; ++i)
            out.deg[n].push_back(GroundMorphism{d.tag, empty, out.levels[n - 1],
                                                {}, Matrix(out.levels[n - 1].size(), 0)});
    }
    out.cache.reset();
    enable_act_cache(out);
    return out;
}

LamSeq linearize(const LamSeq& d) {
    if (d.tag != GroundTag::FINSET) throw GroundError("linearize: FINSET sequence expected");
    LamSeq out;
    out.tag = GroundTag::FINVEC;
    out.N = d.N;
    out.approx = d.approx;
    for (auto& l : d.levels) out.levels.push_back(linearize(l));
    out.trans.resize(d.N + 1);
    out.deg.resize(d.N + 1);
    for (int n = 0; n <= d.N; ++n) {
        for (auto& t : d.trans[n]) out.trans[n].push_back(linearize(t));
        for (auto& g : d.deg[n]) out.deg[n].push_back(linearize(g));
    }
    // the linearized base lives on the canonical FINVEC unit
    out.base = from_matrix(unit_object(GroundTag::FINVEC), out.levels[0], linearize(d.base).mat);
    enable_act_cache(out);
    return out;
}

bool SeqMorphism::is_isomorphism() const {
    for (auto& f : at)
        if (!forge::is_isomorphism(f)) return false;
    return true;
}

SeqMorphism seq_identity(const LamSeq& d) {
    SeqMorphism f;
    f.source = d;
    f.target = d;
    for (auto& l : d.levels) f.at.push_back(identity_morphism(l));
    return f;
}

SeqMorphism seq_compose(const SeqMorphism& g, const SeqMorphism& f) {
    if (!seq_equal(g.source, f.target)) throw GroundError("seq_compose: middle sequences differ");
    SeqMorphism out;
    out.source = f.source;
    out.target = g.target;
    for (size_t n = 0; n < f.at.size(); ++n) out.at.push_back(compose(g.at[n], f.at[n]));
    return out;
}

SeqMorphism seq_invert(const SeqMorphism& f) {
    SeqMorphism out;
    out.source = f.target;
    out.target = f.source;
    for (auto& m : f.at) out.at.push_back(invert(m));
    return out;
}

Report validate(const SeqMorphism& f) {
    Report rep;
    if (f.source.N != f.target.N) {
        rep.add("shape", "seq morphism", "truncation mismatch");
        return rep;
    }
    int N = f.source.N;
    if (static_cast<int>(f.at.size()) != N + 1) {
        rep.add("shape", "seq morphism", "missing level components");
        return rep;
    }
    for (int n = 0; n <= N; ++n) {
        if (!(f.at[n].source == f.source.levels[n]) || !(f.at[n].target == f.target.levels[n]))
            rep.add("shape", "level " + std::to_string(n), "component endpoints mismatch");
    }
    if (!rep.ok()) return rep;
    for (int n = 0; n <= N; ++n) {
        for (int i = 1; i < n; ++i)
            if (!(compose(f.at[n], f.source.trans[n][i - 1]) ==
                  compose(f.target.trans[n][i - 1], f.at[n])))
                rep.add("equivariance", "s_" + std::to_string(i) + " level " + std::to_string(n));
        for (int i = 1; i <= n; ++i)
            if (!(compose(f.at[n - 1], f.source.deg[n][i - 1]) ==
                  compose(f.target.deg[n][i - 1], f.at[n])))
                rep.add("equivariance", "deg_" + std::to_string(i) + " level " + std::to_string(n));
    }
    if (!(compose(f.at[0], f.source.base) == f.target.base))
        rep.add("base", "level 0", "component does not commute with base maps");
    return rep;
}

}  // namespace forge
