#include "forge/operads.hpp"

#include <algorithm>
#include <numeric>

namespace forge {

std::string gamma_key(int k, const std::vector<int>& js) {
    std::string out = std::to_string(k) + ";";
    for (size_t i = 0; i < js.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(js[i]);
    }
    return out;
}

const GroundMorphism& Operad::gamma_at(int k, const std::vector<int>& js) const {
    auto it = gamma.find(gamma_key(k, js));
    if (it == gamma.end())
        throw GroundError("operad: missing gamma entry " + gamma_key(k, js));
    return it->second;
}

bool Operad::has_gamma(int k, const std::vector<int>& js) const {
    return gamma.count(gamma_key(k, js)) > 0;
}

bool operad_equal(const Operad& a, const Operad& b) {
    return seq_equal(a.seq, b.seq) && a.unit == b.unit && a.gamma == b.gamma;
}

namespace {

// every shape (k; j_1..j_k) with sum <= N; k = 0 is the empty composite
std::vector<std::pair<int, std::vector<int>>> gamma_shapes(int N) {
    std::vector<std::pair<int, std::vector<int>>> out;
    out.emplace_back(0, std::vector<int>{});
    for (int k = 1; k <= N; ++k) {
        std::vector<int> cur(k, 0);
        auto rec = [&](auto&& self, int pos, int left) -> void {
            if (pos == k) {
                out.emplace_back(k, cur);
                return;
            }
            for (int j = 0; j <= left; ++j) {
                cur[pos] = j;
                self(self, pos + 1, left - j);
            }
        };
        rec(rec, 0, N);
    }
    return out;
}

void for_each_index(const std::vector<GroundObject>& fs,
                    const std::function<void(const std::vector<int>&, int)>& fn) {
    size_t total = 1;
    for (auto& f : fs) total *= static_cast<size_t>(f.size());
    if (total == 0) return;
    std::vector<int> digits(fs.size(), 0);
    for (size_t flat = 0; flat < total; ++flat) {
        fn(digits, static_cast<int>(flat));
        for (size_t s = fs.size(); s-- > 0;) {
            if (++digits[s] < fs[s].size()) break;
            digits[s] = 0;
        }
    }
}

GroundMorphism empty_morphism(GroundTag tag, const GroundObject& src, const GroundObject& tgt) {
    GroundMorphism m;
    m.tag = tag;
    m.source = src;
    m.target = tgt;
    if (tag == GroundTag::FINVEC) m.mat = Matrix(tgt.size(), src.size());
    return m;
}

}  // namespace

std::vector<std::vector<GroundMorphism>> derive_injections(const Operad& o) {
    GroundTag tag = o.tag();
    int N = o.N();
    std::vector<std::vector<GroundMorphism>> deg(N + 1);
    for (int k = 1; k <= N; ++k) {
        for (int i = 1; i <= k; ++i) {
            if (o.seq.levels[k].size() == 0) {
                deg[k].push_back(empty_morphism(tag, o.seq.levels[k], o.seq.levels[k - 1]));
                continue;
            }
            std::vector<int> js(k, 1);
            js[i - 1] = 0;
            std::vector<GroundObject> tgt = {o.seq.levels[k]};
            std::vector<TensorInsert> ins;
            for (int t = 1; t <= k; ++t) {
                tgt.push_back(o.seq.levels[js[t - 1]]);
                ins.push_back(TensorInsert{t, t == i ? o.seq.base : o.unit});
            }
            GroundMorphism pad =
                tensor_map(tag, {o.seq.levels[k]}, tgt, {0},
                           {identity_morphism(o.seq.levels[k])}, ins);
            deg[k].push_back(compose(o.gamma_at(k, js), pad));
        }
    }
    return deg;
}

Report validate_operad(const Operad& o) {
    Report rep;
    GroundTag tag = o.tag();
    int N = o.N();

    rep.merge(validate(o.seq));
    if (!rep.ok()) return rep;

    if (!(o.unit.source == unit_object(tag)) || !(o.unit.target == o.seq.levels[1])) {
        rep.add("shape", "unit", "iota must map I to level 1");
        return rep;
    }
    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        auto it = o.gamma.find(gamma_key(k, js));
        if (it == o.gamma.end()) {
            rep.add("shape", "gamma " + gamma_key(k, js), "missing entry");
            continue;
        }
        std::vector<GroundObject> fs = {o.seq.levels[k]};
        for (int v : js) fs.push_back(o.seq.levels[v]);
        GroundObject dom = tensor_many(fs);
        if (!(it->second.source == dom) || !(it->second.target == o.seq.levels[j]))
            rep.add("shape", "gamma " + gamma_key(k, js), "endpoint mismatch");
        if (k == 0 && !is_identity(it->second))
            rep.add("shape", "gamma 0;", "the empty composite must be the identity");
    }
    if (!rep.ok()) return rep;

    // unit laws
    for (int n = 0; n <= N; ++n) {
        if (o.seq.levels[n].size() == 0) continue;
        GroundMorphism pad = tensor_map(tag, {o.seq.levels[n]},
                                        {o.seq.levels[1], o.seq.levels[n]}, {1},
                                        {identity_morphism(o.seq.levels[n])},
                                        {TensorInsert{0, o.unit}});
        if (!(compose(o.gamma_at(1, {n}), pad) == identity_morphism(o.seq.levels[n])))
            rep.add("unit-left", "level " + std::to_string(n), "gamma(iota; c) != c");
    }
    for (int k = 1; k <= N; ++k) {
        if (o.seq.levels[k].size() == 0) continue;
        std::vector<int> ones(k, 1);
        std::vector<GroundObject> tgt = {o.seq.levels[k]};
        std::vector<TensorInsert> ins;
        for (int t = 1; t <= k; ++t) {
            tgt.push_back(o.seq.levels[1]);
            ins.push_back(TensorInsert{t, o.unit});
        }
        GroundMorphism pad = tensor_map(tag, {o.seq.levels[k]}, tgt, {0},
                                        {identity_morphism(o.seq.levels[k])}, ins);
        if (!(compose(o.gamma_at(k, ones), pad) == identity_morphism(o.seq.levels[k])))
            rep.add("unit-right", "arity " + std::to_string(k), "gamma(c; iota..iota) != c");
    }

    // associativity
    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        if (o.seq.levels[k].size() == 0) continue;
        std::vector<std::vector<int>> inners;
        {
            std::vector<int> cur(j, 0);
            auto rec = [&](auto&& self, int pos, int left) -> void {
                if (pos == j) {
                    inners.push_back(cur);
                    return;
                }
                for (int v = 0; v <= left; ++v) {
                    cur[pos] = v;
                    self(self, pos + 1, left - v);
                }
            };
            rec(rec, 0, N);
            if (j == 0) inners.push_back({});
        }
        for (auto& is : inners) {
            std::vector<GroundObject> fs = {o.seq.levels[k]};
            for (int v : js) fs.push_back(o.seq.levels[v]);
            for (int v : is) fs.push_back(o.seq.levels[v]);
            bool dead = false;
            for (auto& f : fs)
                if (f.size() == 0) dead = true;
            if (dead) continue;

            std::vector<TensorGroup> lgroups;
            {
                std::vector<int> op_sources(k + 1);
                std::iota(op_sources.begin(), op_sources.end(), 0);
                lgroups.push_back(TensorGroup{op_sources, o.gamma_at(k, js)});
                for (int s = 1; s <= j; ++s)
                    lgroups.push_back(TensorGroup{{k + s}, identity_morphism(fs[k + s])});
            }
            std::vector<GroundObject> ltgt = {o.seq.levels[j]};
            for (int v : is) ltgt.push_back(o.seq.levels[v]);
            GroundMorphism lhs =
                compose(o.gamma_at(j, is), grouped_tensor_map(tag, fs, ltgt, lgroups, {}));

            std::vector<TensorGroup> rgroups;
            rgroups.push_back(TensorGroup{{0}, identity_morphism(fs[0])});
            std::vector<int> outer_js(k);
            int pos = 0;
            for (int t = 1; t <= k; ++t) {
                std::vector<int> sources = {t};
                std::vector<int> slice;
                for (int r = 0; r < js[t - 1]; ++r) {
                    sources.push_back(k + pos + r + 1);
                    slice.push_back(is[pos + r]);
                }
                pos += js[t - 1];
                outer_js[t - 1] = std::accumulate(slice.begin(), slice.end(), 0);
                rgroups.push_back(TensorGroup{sources, o.gamma_at(js[t - 1], slice)});
            }
            std::vector<GroundObject> rtgt = {o.seq.levels[k]};
            for (int v : outer_js) rtgt.push_back(o.seq.levels[v]);
            GroundMorphism rhs = compose(o.gamma_at(k, outer_js),
                                         grouped_tensor_map(tag, fs, rtgt, rgroups, {}));
            if (!(lhs == rhs)) {
                rep.add("associativity",
                        "(" + gamma_key(k, js) + ") then inner (" + gamma_key(j, is) + ")");
                if (rep.findings.size() > 25) return rep;
            }
        }
    }

    // operator equivariance
    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        if (o.seq.levels[k].size() == 0) continue;
        std::vector<GroundObject> fs = {o.seq.levels[k]};
        for (int v : js) fs.push_back(o.seq.levels[v]);
        bool dead = false;
        for (auto& f : fs)
            if (f.size() == 0) dead = true;
        if (dead) continue;
        for (auto& tau : enumerate_permutations(k)) {
            BasedInjection tau_inv = invert_perm(tau);
            std::vector<GroundMorphism> lpieces = {act_perm(o.seq, k, tau)};
            std::vector<int> lplace = {0};
            for (int t = 1; t <= k; ++t) {
                lpieces.push_back(identity_morphism(fs[t]));
                lplace.push_back(t);
            }
            GroundMorphism lhs =
                compose(o.gamma_at(k, js), tensor_map(tag, fs, fs, lplace, lpieces, {}));

            std::vector<int> permuted(k);
            for (int s = 1; s <= k; ++s) permuted[s - 1] = js[tau_inv(s) - 1];
            std::vector<GroundObject> ptgt = {o.seq.levels[k]};
            for (int v : permuted) ptgt.push_back(o.seq.levels[v]);
            std::vector<int> pplace = {0};
            std::vector<GroundMorphism> ppieces = {identity_morphism(o.seq.levels[k])};
            for (int t = 1; t <= k; ++t) {
                pplace.push_back(tau(t));
                ppieces.push_back(identity_morphism(fs[t]));
            }
            GroundMorphism argperm = tensor_map(tag, fs, ptgt, pplace, ppieces, {});
            GroundMorphism rhs = compose(act_perm(o.seq, j, block_permutation(tau, js)),
                                         compose(o.gamma_at(k, permuted), argperm));
            if (!(lhs == rhs)) {
                rep.add("equivariance-operator", gamma_key(k, js) + " tau=" + inj_key(tau));
                if (rep.findings.size() > 25) return rep;
            }
        }
    }

    // argument equivariance over permutation tuples and single degeneracies
    for (auto& [k, js] : gamma_shapes(N)) {
        if (o.seq.levels[k].size() == 0) continue;
        std::vector<GroundObject> fs = {o.seq.levels[k]};
        for (int v : js) fs.push_back(o.seq.levels[v]);
        bool dead = false;
        for (auto& f : fs)
            if (f.size() == 0) dead = true;
        if (dead) continue;

        std::vector<std::vector<BasedInjection>> tuples = {{}};
        for (int t = 0; t < k; ++t) {
            std::vector<std::vector<BasedInjection>> next;
            for (auto& pre : tuples)
                for (auto& s : enumerate_permutations(js[t])) {
                    auto cp = pre;
                    cp.push_back(s);
                    next.push_back(std::move(cp));
                }
            tuples = std::move(next);
        }
        for (int t = 1; t <= k; ++t) {
            if (js[t - 1] == 0) continue;
            for (int i = 1; i <= js[t - 1]; ++i) {
                std::vector<BasedInjection> tup;
                for (int s = 1; s <= k; ++s)
                    tup.push_back(s == t ? skip_injection(i, js[s - 1])
                                         : identity_perm(js[s - 1]));
                tuples.push_back(std::move(tup));
            }
        }

        for (auto& tup : tuples) {
            std::vector<int> as(k);
            BasedInjection wedge{0, 0, {}};
            bool first = true;
            for (int t = 0; t < k; ++t) {
                as[t] = tup[t].m;
                wedge = first ? tup[t] : block_sum(wedge, tup[t]);
                first = false;
            }
            if (k == 0) wedge = identity_perm(0);
            std::vector<GroundObject> atgt = {o.seq.levels[k]};
            std::vector<int> place = {0};
            std::vector<GroundMorphism> pieces = {identity_morphism(o.seq.levels[k])};
            for (int t = 1; t <= k; ++t) {
                atgt.push_back(o.seq.levels[as[t - 1]]);
                place.push_back(t);
                pieces.push_back(act(o.seq, tup[t - 1]));
            }
            GroundMorphism lhs =
                compose(o.gamma_at(k, as), tensor_map(tag, fs, atgt, place, pieces, {}));
            GroundMorphism rhs = compose(act(o.seq, wedge), o.gamma_at(k, js));
            if (!(lhs == rhs)) {
                rep.add("equivariance-argument", gamma_key(k, js));
                if (rep.findings.size() > 25) return rep;
            }
        }
    }

    // the stored injections must equal the gamma-derived ones
    auto derived = derive_injections(o);
    for (int kk = 1; kk <= N; ++kk)
        for (int i = 1; i <= kk; ++i)
            if (!(o.seq.deg[kk][i - 1] == derived[kk][i - 1]))
                rep.add("derived-injections",
                        "deg_" + std::to_string(i) + " level " + std::to_string(kk),
                        "stored degeneracy differs from the gamma-derived one");
    return rep;
}

MonoidSeq to_monoid(const Operad& o) {
    Report rep = validate_operad(o);
    if (!rep.ok()) throw GroundError("to_monoid: operad fails validation:\n" + rep.text());
    MonoidSeq m;
    m.seq = o.seq;
    m.square = kelly(o.seq, o.seq, KellyFlavor::lambda_closed);

    m.mu.source = m.square.seq;
    m.mu.target = o.seq;
    for (int n = 0; n <= o.N(); ++n) {
        GroundMorphism h = glue_from_sum(m.square.pre[n], o.seq.levels[n], [&](int ci) {
            const std::string& key = m.square.pre[n].comps[ci].key;
            size_t bang = key.find('!');
            int k = std::stoi(key.substr(0, bang));
            std::string pk = key.substr(bang + 1);
            size_t bar = pk.find('|');
            std::vector<int> js;
            size_t pos = 0;
            while (pos < bar) {
                size_t comma = pk.find(',', pos);
                if (comma == std::string::npos || comma > bar) comma = bar;
                js.push_back(std::stoi(pk.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            BasedInjection delta = inj_from_key(pk.substr(bar + 1));
            GroundMorphism g =
                k == 0 ? identity_morphism(o.seq.levels[0]) : o.gamma_at(k, js);
            return compose(act(o.seq, invert_perm(delta)), g);
        });
        m.mu.at.push_back(factor_through(m.square.quot[n], h));
    }

    LamSeq i1 = I1(o.tag(), o.N());
    m.eta.source = i1;
    m.eta.target = o.seq;
    m.eta.at.push_back(o.seq.base);
    m.eta.at.push_back(o.unit);
    for (int n = 2; n <= o.N(); ++n)
        m.eta.at.push_back(empty_morphism(o.tag(), i1.levels[n], o.seq.levels[n]));
    return m;
}

Operad from_monoid(const MonoidSeq& m) {
    Operad o;
    o.seq = m.seq;
    o.unit = m.eta.at[1];
    int N = m.seq.N;
    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        std::vector<GroundObject> fs = {m.seq.levels[k]};
        for (int v : js) fs.push_back(m.seq.levels[v]);
        GroundObject dom = tensor_many(fs);
        if (dom.size() == 0) {
            o.gamma.emplace(gamma_key(k, js), empty_morphism(m.seq.tag, dom, m.seq.levels[j]));
            continue;
        }
        std::string key = std::to_string(k) + "!" + power_key(js, identity_perm(j));
        int ci = m.square.pre[j].find(key);
        if (ci < 0) throw GroundError("from_monoid: missing component " + key);
        GroundMorphism inj = from_columns(dom, m.square.pre[j].total, [&](int l) {
            return Column{{m.square.pre[j].offsets[ci] + l, Rational(1)}};
        });
        o.gamma.emplace(gamma_key(k, js),
                        compose(m.mu.at[j], compose(m.square.quot[j].proj, inj)));
    }
    return o;
}

bool monoid_equal(const MonoidSeq& a, const MonoidSeq& b) {
    if (!seq_equal(a.seq, b.seq)) return false;
    if (!(a.mu.at == b.mu.at)) return false;
    return a.eta.at == b.eta.at;
}

Report validate_monoid(const MonoidSeq& m) {
    Report rep;
    rep.merge(validate(m.seq));
    if (!rep.ok()) return rep;
    Report rmu = validate(m.mu);
    for (auto& f : rmu.findings) rep.add("mu " + f.check, f.location, f.detail);
    Report reta = validate(m.eta);
    for (auto& f : reta.findings) rep.add("eta " + f.check, f.location, f.detail);
    if (!rep.ok()) return rep;

    const LamSeq& c = m.seq;
    LamSeq i1 = I1(c.tag, c.N);

    KellyProduct left = kelly(i1, c, KellyFlavor::lambda_closed);
    SeqMorphism eta_left = kelly_map(left, m.square, m.eta, seq_identity(c));
    SeqMorphism lu = kelly_left_unit(left);
    for (int n = 0; n <= c.N; ++n)
        if (!(compose(m.mu.at[n], eta_left.at[n]) == lu.at[n]))
            rep.add("monoid-unit-left", "level " + std::to_string(n));

    KellyProduct right = kelly(c, i1, KellyFlavor::lambda_closed);
    SeqMorphism eta_right = kelly_map(right, m.square, seq_identity(c), m.eta);
    SeqMorphism ru = kelly_right_unit(right);
    for (int n = 0; n <= c.N; ++n)
        if (!(compose(m.mu.at[n], eta_right.at[n]) == ru.at[n]))
            rep.add("monoid-unit-right", "level " + std::to_string(n));

    KellyProduct sq3l = kelly(m.square.seq, c, KellyFlavor::lambda_closed);
    KellyProduct sq3r = kelly(c, m.square.seq, KellyFlavor::lambda_closed);
    SeqMorphism mu_left = kelly_map(sq3l, m.square, m.mu, seq_identity(c));
    SeqMorphism mu_right = kelly_map(sq3r, m.square, seq_identity(c), m.mu);
    SeqMorphism assoc = kelly_associator(m.square, sq3l, m.square, sq3r);
    for (int n = 0; n <= c.N; ++n) {
        GroundMorphism lhs = compose(m.mu.at[n], mu_left.at[n]);
        GroundMorphism rhs = compose(m.mu.at[n], compose(mu_right.at[n], assoc.at[n]));
        if (!(lhs == rhs)) rep.add("monoid-associativity", "level " + std::to_string(n));
    }
    return rep;
}

// -- builtins -------------------------------------------------------------------------

namespace {

LamSeq com_underlying(int N) {
    LamSeq d;
    d.tag = GroundTag::FINSET;
    d.N = N;
    GroundObject I = unit_object(GroundTag::FINSET);
    d.levels.assign(N + 1, I);
    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        for (int i = 1; i < n; ++i) d.trans[n].push_back(identity_morphism(I));
        for (int i = 1; i <= n; ++i) d.deg[n].push_back(identity_morphism(I));
    }
    d.base = identity_morphism(I);
    enable_act_cache(d);
    return d;
}

Operad build_com(int N) {
    Operad o;
    o.seq = com_underlying(N);
    o.unit = identity_morphism(unit_object(GroundTag::FINSET));
    for (auto& [k, js] : gamma_shapes(N)) {
        std::vector<GroundObject> fs = {o.seq.levels[k]};
        for (int v : js) fs.push_back(o.seq.levels[v]);
        int j = std::accumulate(js.begin(), js.end(), 0);
        o.gamma.emplace(gamma_key(k, js),
                        from_label_fn(tensor_many(fs), o.seq.levels[j],
                                      [](const std::string&) { return "*"; }));
    }
    return o;
}

Operad build_ass(int N) {
    Operad o;
    LamSeq d;
    d.tag = GroundTag::FINSET;
    d.N = N;
    for (int n = 0; n <= N; ++n) {
        std::vector<std::string> labels;
        for (auto& p : enumerate_permutations(n)) labels.push_back(inj_key(p));
        d.levels.push_back(GroundObject(GroundTag::FINSET, std::move(labels)));
    }
    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        for (int i = 1; i < n; ++i) {
            BasedInjection si = adjacent_transposition(i, n);
            d.trans[n].push_back(
                from_label_fn(d.levels[n], d.levels[n], [&](const std::string& l) {
                    return inj_key(compose(inj_from_key(l), si));
                }));
        }
    d.base = from_label_fn(unit_object(GroundTag::FINSET), d.levels[0],
                           [&](const std::string&) { return d.levels[0].label(0); });
    o.unit = from_label_fn(unit_object(GroundTag::FINSET), d.levels[1],
                           [&](const std::string&) { return inj_key(identity_perm(1)); });

    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        std::vector<GroundObject> fs = {d.levels[k]};
        for (int v : js) fs.push_back(d.levels[v]);
        GroundObject dom = tensor_many(fs);
        std::vector<int> table(dom.size());
        auto perms_k = enumerate_permutations(k);
        std::vector<std::vector<BasedInjection>> perms_js;
        for (int v : js) perms_js.push_back(enumerate_permutations(v));
        for_each_index(fs, [&](const std::vector<int>& digits, int flat) {
            const BasedInjection& tau = perms_k[digits[0]];
            BasedInjection sum{0, 0, {}};
            bool first = true;
            for (int t = 1; t <= k; ++t) {
                const BasedInjection& st = perms_js[t - 1][digits[t]];
                sum = first ? st : block_sum(sum, st);
                first = false;
            }
            if (k == 0) sum = identity_perm(0);
            BasedInjection value = compose(block_permutation(tau, js), sum);
            table[flat] = d.levels[j].index_of(inj_key(value));
        });
        o.gamma.emplace(gamma_key(k, js), from_table(dom, d.levels[j], std::move(table)));
    }
    o.seq = std::move(d);
    o.seq.deg = derive_injections(o);
    enable_act_cache(o.seq);
    return o;
}

Operad build_trivial(int N) {
    Operad o;
    o.seq = I1(GroundTag::FINSET, N);
    o.unit = identity_morphism(unit_object(GroundTag::FINSET));
    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        std::vector<GroundObject> fs = {o.seq.levels[k]};
        for (int v : js) fs.push_back(o.seq.levels[v]);
        GroundObject dom = tensor_many(fs);
        if (dom.size() == 0 || o.seq.levels[j].size() == 0) {
            o.gamma.emplace(gamma_key(k, js),
                            empty_morphism(GroundTag::FINSET, dom, o.seq.levels[j]));
        } else {
            const GroundObject& tgt = o.seq.levels[j];
            o.gamma.emplace(gamma_key(k, js),
                            from_label_fn(dom, tgt,
                                          [&tgt](const std::string&) { return tgt.label(0); }));
        }
    }
    return o;
}

Operad build_end(int N, const BasedObject& x) {
    if (x.carrier.tag != GroundTag::FINSET)
        throw GroundError("end: finite hom-sets need the FINSET ground category");
    int sz = x.carrier.size();
    if (sz == 0) throw GroundError("end: empty carrier");
    Operad o;
    LamSeq d;
    d.tag = GroundTag::FINSET;
    d.N = N;

    auto pow = [&](int n) {
        size_t p = 1;
        for (int i = 0; i < n; ++i) p *= static_cast<size_t>(sz);
        return p;
    };
    auto fn_label = [&](const std::vector<int>& images) {
        std::string l = "f";
        for (size_t i = 0; i < images.size(); ++i) {
            if (i) l += '.';
            l += std::to_string(images[i]);
        }
        return l;
    };
    auto fn_images = [&](const std::string& label) {
        std::vector<int> out;
        size_t pos = 1;
        while (pos < label.size()) {
            size_t dot = label.find('.', pos);
            if (dot == std::string::npos) dot = label.size();
            out.push_back(std::stoi(label.substr(pos, dot - pos)));
            pos = dot + 1;
        }
        return out;
    };

    for (int n = 0; n <= N; ++n) {
        size_t inputs = pow(n);
        std::vector<std::string> labels;
        std::vector<int> images(inputs, 0);
        bool done = false;
        while (!done) {
            labels.push_back(fn_label(images));
            done = true;
            for (size_t i = inputs; i-- > 0;) {
                if (++images[i] < sz) {
                    done = false;
                    break;
                }
                images[i] = 0;
            }
        }
        d.levels.push_back(GroundObject(GroundTag::FINSET, std::move(labels)));
    }

    auto tuple_index = [&](const std::vector<int>& xs) {
        size_t t = 0;
        for (int v : xs) t = t * sz + v;
        return t;
    };

    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        for (int i = 1; i < n; ++i) {
            BasedInjection si_inv = invert_perm(adjacent_transposition(i, n));
            d.trans[n].push_back(
                from_label_fn(d.levels[n], d.levels[n], [&](const std::string& l) {
                    std::vector<int> f = fn_images(l);
                    std::vector<int> out(f.size());
                    std::vector<int> xs(n, 0);
                    for (size_t t = 0; t < f.size(); ++t) {
                        std::vector<int> ys(n);
                        for (int p = 1; p <= n; ++p) ys[p - 1] = xs[si_inv(p) - 1];
                        out[t] = f[tuple_index(ys)];
                        for (int p = n - 1; p >= 0; --p) {
                            if (++xs[p] < sz) break;
                            xs[p] = 0;
                        }
                    }
                    return fn_label(out);
                }));
        }
    int base_idx = x.base.table[0];
    d.base = from_label_fn(unit_object(GroundTag::FINSET), d.levels[0],
                           [&](const std::string&) { return fn_label({base_idx}); });
    {
        std::vector<int> idf(sz);
        std::iota(idf.begin(), idf.end(), 0);
        o.unit = from_label_fn(unit_object(GroundTag::FINSET), d.levels[1],
                               [&](const std::string&) { return fn_label(idf); });
    }

    for (auto& [k, js] : gamma_shapes(N)) {
        int j = std::accumulate(js.begin(), js.end(), 0);
        std::vector<GroundObject> fs = {d.levels[k]};
        for (int v : js) fs.push_back(d.levels[v]);
        GroundObject dom = tensor_many(fs);
        std::vector<int> table(dom.size());
        for_each_index(fs, [&](const std::vector<int>& digits, int flat) {
            std::vector<int> f = fn_images(d.levels[k].label(digits[0]));
            std::vector<std::vector<int>> gs;
            for (int t = 1; t <= k; ++t)
                gs.push_back(fn_images(d.levels[js[t - 1]].label(digits[t])));
            std::vector<int> out(pow(j));
            std::vector<int> xs(j, 0);
            for (size_t t = 0; t < out.size(); ++t) {
                std::vector<int> ys(k);
                int posn = 0;
                for (int b = 0; b < k; ++b) {
                    std::vector<int> block(xs.begin() + posn, xs.begin() + posn + js[b]);
                    ys[b] = gs[b][tuple_index(block)];
                    posn += js[b];
                }
                out[t] = f[tuple_index(ys)];
                for (int p = j - 1; p >= 0; --p) {
                    if (++xs[p] < sz) break;
                    xs[p] = 0;
                }
            }
            table[flat] = d.levels[j].index_of(fn_label(out));
        });
        o.gamma.emplace(gamma_key(k, js), from_table(dom, d.levels[j], std::move(table)));
    }
    o.seq = std::move(d);
    o.seq.deg = derive_injections(o);
    enable_act_cache(o.seq);
    return o;
}

}  // namespace

Operad builtin_operad(BuiltinOperad which, int N, const BasedObject* end_carrier) {
    switch (which) {
        case BuiltinOperad::com:
            return build_com(N);
        case BuiltinOperad::ass:
            return build_ass(N);
        case BuiltinOperad::trivial:
            return build_trivial(N);
        case BuiltinOperad::end:
            if (!end_carrier) throw GroundError("end: carrier required");
            return build_end(N, *end_carrier);
    }
    throw GroundError("unknown builtin operad");
}

Operad linearize(const Operad& o) {
    Operad out;
    out.seq = linearize(o.seq);
    out.unit =
        from_matrix(unit_object(GroundTag::FINVEC), out.seq.levels[1], linearize(o.unit).mat);
    for (auto& [key, g] : o.gamma) out.gamma.emplace(key, linearize(g));
    return out;
}

}  // namespace forge
