#include "forge/algebras.hpp"

#include <algorithm>
#include <numeric>

namespace forge {

namespace {

int section_rep_idx(const Coequalizer& q, int j) {
    if (q.section.tag == GroundTag::FINSET) return q.section.table[j];
    for (int r = 0; r < q.section.mat.rows; ++r)
        if (q.section.mat.at(r, j) != 0) {
            if (q.section.mat.at(r, j) != 1)
                throw GroundError("section: non-unit representative");
            return r;
        }
    throw GroundError("section: zero column");
}

Column proj_column(const Coequalizer& q, int pre_idx) {
    Column col;
    if (q.proj.tag == GroundTag::FINSET) {
        col.emplace_back(q.proj.table[pre_idx], Rational(1));
    } else {
        for (int r = 0; r < q.proj.mat.rows; ++r)
            if (q.proj.mat.at(r, pre_idx) != 0) col.emplace_back(r, q.proj.mat.at(r, pre_idx));
    }
    return col;
}

Column morphism_column(const GroundMorphism& m, int idx) {
    Column col;
    if (m.tag == GroundTag::FINSET) {
        col.emplace_back(m.table[idx], Rational(1));
    } else {
        for (int r = 0; r < m.mat.rows; ++r)
            if (m.mat.at(r, idx) != 0) col.emplace_back(r, m.mat.at(r, idx));
    }
    return col;
}

PartialMorphism partial_from_columns(const GroundObject& src, const GroundObject& tgt,
                                     const std::function<bool(int, Column&)>& fn) {
    PartialMorphism out;
    out.map.tag = src.tag;
    out.map.source = src;
    out.map.target = tgt;
    out.defined.assign(src.size(), 0);
    if (src.tag == GroundTag::FINSET)
        out.map.table.assign(src.size(), -1);
    else
        out.map.mat = Matrix(tgt.size(), src.size());
    for (int i = 0; i < src.size(); ++i) {
        Column col;
        if (!fn(i, col)) continue;
        out.defined[i] = 1;
        if (src.tag == GroundTag::FINSET) {
            if (col.size() != 1 || col[0].second != 1)
                throw GroundError("partial_from_columns: FINSET column must be a unit");
            out.map.table[i] = col[0].first;
        } else {
            for (auto& [r, v] : col) out.map.mat.at(r, i) += v;
        }
    }
    return out;
}

}  // namespace

PartialMorphism partial_tensor_lambda_map(const TensorLambda& src, const TensorLambda& tgt,
                                          const PartialMorphism& f) {
    return partial_from_columns(src.result.carrier, tgt.result.carrier, [&](int i, Column& col) {
        int rep = section_rep_idx(src.quot, i);
        int ci = src.pre.comp_of(rep);
        int k = std::stoi(src.pre.comps[ci].key);
        std::vector<int> ds = src.pre.digits(rep);
        // map every point through f, keep the operator element
        std::vector<Column> point_cols;
        for (int s = 1; s <= k; ++s) {
            if (!f.defined[ds[s]]) return false;
            point_cols.push_back(morphism_column(f.map, ds[s]));
        }
        int tci = tgt.pre.find(std::to_string(k));
        if (tci < 0) return false;
        // expand the product of point columns
        std::vector<std::pair<int, Rational>> acc = {{ds[0], Rational(1)}};
        for (auto& pc : point_cols) {
            std::vector<std::pair<int, Rational>> next;
            for (auto& [base, coef] : acc)
                for (auto& [r, v] : pc)
                    next.emplace_back(base * tgt.x.carrier.size() + r, coef * v);
            acc = std::move(next);
        }
        for (auto& [local, coef] : acc)
            for (auto& [r, v] : proj_column(tgt.quot, tgt.pre.offsets[tci] + local))
                col.emplace_back(r, coef * v);
        return true;
    });
}

OperadMonad monad(const Operad& c, const BasedObject& x) {
    OperadMonad m;
    m.c = c;
    m.x = x;
    m.cx = tensor_lambda(c.seq, x);
    m.ccx = tensor_lambda(c.seq, m.cx.result);
    int N = c.N();

    // eta: X -> C-bar X through the unit at arity 1
    m.eta_x = from_columns(x.carrier, m.cx.result.carrier, [&](int xi) {
        int ci = m.cx.pre.find("1");
        if (ci < 0) throw GroundError("monad: missing arity-1 component");
        Column col;
        for (auto& [r, v] : morphism_column(c.unit, 0)) {
            int local = r * x.carrier.size() + xi;
            for (auto& [q, w] : proj_column(m.cx.quot, m.cx.pre.offsets[ci] + local))
                col.emplace_back(q, v * w);
        }
        return col;
    });

    bool clipped = false;
    m.mu_x = partial_from_columns(
        m.ccx.result.carrier, m.cx.result.carrier, [&](int i, Column& col) {
            int rep = section_rep_idx(m.ccx.quot, i);
            int ci = m.ccx.pre.comp_of(rep);
            int k = std::stoi(m.ccx.pre.comps[ci].key);
            std::vector<int> ds = m.ccx.pre.digits(rep);
            // expand the inner classes
            std::vector<int> arities;
            std::vector<int> op_idx;     // inner operator element per slot
            std::vector<std::vector<int>> xs;  // inner points per slot
            for (int s = 1; s <= k; ++s) {
                int yrep = section_rep_idx(m.cx.quot, ds[s]);
                int yci = m.cx.pre.comp_of(yrep);
                int j = std::stoi(m.cx.pre.comps[yci].key);
                std::vector<int> yds = m.cx.pre.digits(yrep);
                arities.push_back(j);
                op_idx.push_back(yds[0]);
                xs.push_back(std::vector<int>(yds.begin() + 1, yds.end()));
            }
            int total = std::accumulate(arities.begin(), arities.end(), 0);
            if (total > N) {
                clipped = true;
                return false;
            }
            // gamma applied to (c; e_1..e_k), points concatenated
            const GroundMorphism& g = c.gamma_at(k, arities);
            int gcol = ds[0];
            for (int s = 0; s < k; ++s)
                gcol = gcol * c.seq.levels[arities[s]].size() + op_idx[s];
            int tci = m.cx.pre.find(std::to_string(total));
            if (tci < 0) return false;
            int xlocal = 0;
            for (auto& block : xs)
                for (int v : block) xlocal = xlocal * x.carrier.size() + v;
            for (auto& [r, v] : morphism_column(g, gcol)) {
                int local = r;
                int xsz = 1;
                for (int t = 0; t < total; ++t) xsz *= x.carrier.size();
                local = local * xsz + xlocal;
                for (auto& [q, w] : proj_column(m.cx.quot, m.cx.pre.offsets[tci] + local))
                    col.emplace_back(q, v * w);
            }
            return true;
        });
    m.approx = clipped;
    return m;
}

Report validate_monad_laws(const OperadMonad& m) {
    Report rep;
    // mu o C-bar(eta) = id
    PartialMorphism ceta =
        partial_tensor_lambda_map(m.cx, m.ccx, as_partial(m.eta_x));
    PartialMorphism left = compose(m.mu_x, ceta);
    if (!agree_where_defined(left, as_partial(identity_morphism(m.cx.result.carrier))))
        rep.add("monad-unit", "mu o C-bar eta", "does not restrict to the identity");
    if (!left.total()) rep.add("monad-unit", "mu o C-bar eta", "unexpectedly partial");

    // mu o eta_{C-bar X} = id
    OperadMonad at_cx = monad(m.c, m.cx.result);
    PartialMorphism right = compose(m.mu_x, as_partial(at_cx.eta_x));
    if (!agree_where_defined(right, as_partial(identity_morphism(m.cx.result.carrier))))
        rep.add("monad-unit", "mu o eta", "does not restrict to the identity");
    if (!right.total()) rep.add("monad-unit", "mu o eta", "unexpectedly partial");

    // associativity on the triple application, where computable
    TensorLambda cccx = tensor_lambda(m.c.seq, m.ccx.result);
    PartialMorphism cmu = partial_tensor_lambda_map(cccx, m.ccx, m.mu_x);
    PartialMorphism lhs = compose(m.mu_x, cmu);
    PartialMorphism mu_at_cx = at_cx.mu_x;
    PartialMorphism rhs = compose(m.mu_x, mu_at_cx);
    int compared = 0;
    if (!agree_where_defined(lhs, rhs, &compared))
        rep.add("monad-associativity", "mu o C-bar mu vs mu o mu",
                "composites disagree on the computable instances");
    if (compared == 0)
        rep.add("monad-associativity", "coverage", "no computable instances at this truncation");
    return rep;
}

AlgebraStructure make_algebra(const Operad& c, const BasedObject& x,
                              const GroundMorphism& theta) {
    AlgebraStructure a;
    a.c = c;
    a.x = x;
    a.cx = tensor_lambda(c.seq, x);
    a.theta = as_partial(theta);
    return a;
}

AlgebraStructure initial_algebra(const Operad& c) {
    BasedObject x = p0(c.seq);
    AlgebraStructure a;
    a.c = c;
    a.x = x;
    a.cx = tensor_lambda(c.seq, x);
    GroundMorphism theta =
        from_columns(a.cx.result.carrier, x.carrier, [&](int i) {
            int rep = section_rep_idx(a.cx.quot, i);
            int ci = a.cx.pre.comp_of(rep);
            int k = std::stoi(a.cx.pre.comps[ci].key);
            std::vector<int> ds = a.cx.pre.digits(rep);
            if (k == 0) return Column{{ds[0], Rational(1)}};
            std::vector<int> zeros(k, 0);
            const GroundMorphism& g = c.gamma_at(k, zeros);
            int gcol = ds[0];
            for (int s = 1; s <= k; ++s) gcol = gcol * x.carrier.size() + ds[s];
            return morphism_column(g, gcol);
        });
    a.theta = as_partial(theta);
    return a;
}

AlgebraStructure free_algebra(const Operad& c, const BasedObject& x) {
    OperadMonad m = monad(c, x);
    AlgebraStructure a;
    a.c = c;
    a.x = m.cx.result;
    a.cx = m.ccx;
    a.theta = m.mu_x;
    return a;
}

GroundMorphism initial_algebra_map(const AlgebraStructure& a) {
    // theta_0: C(0) = C(0) (x) X^0 -> X
    int ci = a.cx.pre.find("0");
    if (ci < 0) throw GroundError("initial_algebra_map: no arity-0 component");
    GroundMorphism inj = from_columns(a.c.seq.levels[0], a.cx.pre.total, [&](int l) {
        return Column{{a.cx.pre.offsets[ci] + l, Rational(1)}};
    });
    GroundMorphism cls = compose(a.cx.quot.proj, inj);
    if (!a.theta.total()) throw GroundError("initial_algebra_map: partial action");
    return compose(a.theta.map, cls);
}

Report validate_algebra(const AlgebraStructure& a) {
    Report rep;
    OperadMonad m = monad(a.c, a.x);
    // unit square: theta o eta = id
    PartialMorphism unit_sq = compose(a.theta, as_partial(m.eta_x));
    if (!agree_where_defined(unit_sq, as_partial(identity_morphism(a.x.carrier))))
        rep.add("algebra-unit", "theta o eta", "not the identity");
    if (!unit_sq.total()) rep.add("algebra-unit", "theta o eta", "unexpectedly partial");

    // associativity square: theta o C-bar theta = theta o mu, where computable
    PartialMorphism ctheta = partial_tensor_lambda_map(m.ccx, m.cx, a.theta);
    PartialMorphism lhs = compose(a.theta, ctheta);
    PartialMorphism rhs = compose(a.theta, m.mu_x);
    int compared = 0;
    if (!agree_where_defined(lhs, rhs, &compared))
        rep.add("algebra-associativity", "theta o C-bar theta vs theta o mu");
    if (compared == 0) rep.add("algebra-associativity", "coverage", "no computable instances");
    return rep;
}

ModuleStructure make_module(const LamSeq& m, const Operad& c, ModuleSide side,
                            const SeqMorphism& action) {
    ModuleStructure out;
    out.m = m;
    out.c = c;
    out.side = side;
    out.prod = side == ModuleSide::right ? kelly(m, c.seq, KellyFlavor::lambda_closed)
                                         : kelly(c.seq, m, KellyFlavor::lambda_closed);
    out.action = action;
    return out;
}

ModuleStructure self_module(const Operad& c, ModuleSide side) {
    MonoidSeq mono = to_monoid(c);
    ModuleStructure out;
    out.m = c.seq;
    out.c = c;
    out.side = side;
    out.prod = mono.square;
    out.action = mono.mu;
    return out;
}

ModuleStructure module_from_algebra(const AlgebraStructure& a) {
    if (!a.theta.total()) throw GroundError("module_from_algebra: partial action");
    LamSeq i0x = embed(a.x, EmbedMode::i0, a.c.N());
    ModuleStructure out;
    out.m = i0x;
    out.c = a.c;
    out.side = ModuleSide::left;
    out.prod = kelly(a.c.seq, i0x, KellyFlavor::lambda_closed);
    SeqMorphism iso = kelly_i0_iso(out.prod, a.cx);  // C odot i0X -> i0 C-bar X
    out.action.source = out.prod.seq;
    out.action.target = i0x;
    for (int n = 0; n <= a.c.N(); ++n) {
        if (n == 0) {
            out.action.at.push_back(compose(a.theta.map, iso.at[0]));
        } else {
            GroundMorphism empty;
            empty.tag = a.c.tag();
            empty.source = out.prod.seq.levels[n];
            empty.target = i0x.levels[n];
            if (a.c.tag() == GroundTag::FINVEC)
                empty.mat = Matrix(0, out.prod.seq.levels[n].size());
            out.action.at.push_back(empty);
        }
    }
    return out;
}

AlgebraStructure algebra_from_module(const ModuleStructure& m) {
    if (m.side != ModuleSide::left) throw GroundError("algebra_from_module: left module expected");
    for (int n = 1; n <= m.c.N(); ++n)
        if (m.m.levels[n].size() != 0)
            throw GroundError("algebra_from_module: module not concentrated at level 0");
    BasedObject x = p0(m.m);
    TensorLambda cx = tensor_lambda(m.c.seq, x);
    SeqMorphism iso = kelly_i0_iso(m.prod, cx);
    GroundMorphism theta = compose(m.action.at[0], invert(iso.at[0]));
    return make_algebra(m.c, x, theta);
}

Report validate_module(const ModuleStructure& m) {
    Report rep;
    Report ra = validate(m.action);
    for (auto& f : ra.findings) rep.add("action " + f.check, f.location, f.detail);
    if (!rep.ok()) return rep;
    const LamSeq& c = m.c.seq;
    MonoidSeq mono = to_monoid(m.c);
    LamSeq i1 = I1(c.tag, c.N);

    if (m.side == ModuleSide::right) {
        // unit: act o (id odot eta) = right unit iso
        KellyProduct mi1 = kelly(m.m, i1, KellyFlavor::lambda_closed);
        SeqMorphism ins = kelly_map(mi1, m.prod, seq_identity(m.m), mono.eta);
        SeqMorphism ru = kelly_right_unit(mi1);
        for (int n = 0; n <= c.N; ++n)
            if (!(compose(m.action.at[n], ins.at[n]) == ru.at[n]))
                rep.add("module-unit", "level " + std::to_string(n));
        // associativity: act o (act odot id) = act o (id odot mu) o assoc
        KellyProduct mc_c = kelly(m.prod.seq, c, KellyFlavor::lambda_closed);
        KellyProduct m_cc = kelly(m.m, mono.square.seq, KellyFlavor::lambda_closed);
        SeqMorphism act_left = kelly_map(mc_c, m.prod, m.action, seq_identity(c));
        SeqMorphism mu_right = kelly_map(m_cc, m.prod, seq_identity(m.m), mono.mu);
        SeqMorphism assoc = kelly_associator(m.prod, mc_c, mono.square, m_cc);
        for (int n = 0; n <= c.N; ++n) {
            GroundMorphism lhs = compose(m.action.at[n], act_left.at[n]);
            GroundMorphism rhs = compose(m.action.at[n], compose(mu_right.at[n], assoc.at[n]));
            if (!(lhs == rhs)) rep.add("module-associativity", "level " + std::to_string(n));
        }
    } else {
        KellyProduct i1m = kelly(i1, m.m, KellyFlavor::lambda_closed);
        SeqMorphism ins = kelly_map(i1m, m.prod, mono.eta, seq_identity(m.m));
        SeqMorphism lu = kelly_left_unit(i1m);
        for (int n = 0; n <= c.N; ++n)
            if (!(compose(m.action.at[n], ins.at[n]) == lu.at[n]))
                rep.add("module-unit", "level " + std::to_string(n));
        // associativity: act o (mu odot id) = act o (id odot act) o assoc
        KellyProduct cc_m = kelly(mono.square.seq, m.m, KellyFlavor::lambda_closed);
        KellyProduct c_cm = kelly(c, m.prod.seq, KellyFlavor::lambda_closed);
        SeqMorphism mu_left = kelly_map(cc_m, m.prod, mono.mu, seq_identity(m.m));
        SeqMorphism act_right = kelly_map(c_cm, m.prod, seq_identity(c), m.action);
        SeqMorphism assoc = kelly_associator(mono.square, cc_m, m.prod, c_cm);
        for (int n = 0; n <= c.N; ++n) {
            GroundMorphism lhs = compose(m.action.at[n], mu_left.at[n]);
            GroundMorphism rhs = compose(m.action.at[n], compose(act_right.at[n], assoc.at[n]));
            if (!(lhs == rhs)) rep.add("module-associativity", "level " + std::to_string(n));
        }
    }
    return rep;
}

PartialMorphism flat_action(const KellyProduct& mc, const SeqMorphism& action,
                            const TensorLambda& m_cx, const TensorLambda& cx,
                            const TensorLambda& mx) {
    int N = mc.N;
    return partial_from_columns(
        m_cx.result.carrier, mx.result.carrier, [&](int i, Column& col) {
            int rep = section_rep_idx(m_cx.quot, i);
            int ci = m_cx.pre.comp_of(rep);
            int k = std::stoi(m_cx.pre.comps[ci].key);
            std::vector<int> ds = m_cx.pre.digits(rep);
            std::vector<int> arities;
            std::vector<int> ops;
            std::vector<std::vector<int>> xs;
            for (int s = 1; s <= k; ++s) {
                int yrep = section_rep_idx(cx.quot, ds[s]);
                int yci = cx.pre.comp_of(yrep);
                arities.push_back(std::stoi(cx.pre.comps[yci].key));
                std::vector<int> yds = cx.pre.digits(yrep);
                ops.push_back(yds[0]);
                xs.push_back(std::vector<int>(yds.begin() + 1, yds.end()));
            }
            int total = std::accumulate(arities.begin(), arities.end(), 0);
            if (total > N) return false;
            // the kelly class of (m; e_1..e_k; identity coset) at level `total`
            int pci = mc.pre[total].find(std::to_string(k) + "!" +
                                         power_key(arities, identity_perm(total)));
            if (pci < 0) return false;
            int plocal = ds[0];
            const auto& pfs = mc.pre[total].comps[pci].factors;
            for (int s = 1; s <= k; ++s) plocal = plocal * pfs[s].size() + ops[s - 1];
            int xlocal = 0;
            int xsz = mx.x.carrier.size();
            for (auto& block : xs)
                for (int v : block) xlocal = xlocal * xsz + v;
            int xcount = 1;
            for (int t = 0; t < total; ++t) xcount *= xsz;
            int tci = mx.pre.find(std::to_string(total));
            if (tci < 0) return false;
            // proj to the product class, act, then rebuild the M-bar X class
            for (auto& [q1, v1] : proj_column(mc.quot[total],
                                              mc.pre[total].offsets[pci] + plocal))
                for (auto& [q2, v2] : morphism_column(action.at[total], q1))
                    for (auto& [q3, v3] : proj_column(
                             mx.quot, mx.pre.offsets[tci] + q2 * xcount + xlocal))
                        col.emplace_back(q3, v1 * v2 * v3);
            return true;
        });
}

// -- scanning-map helpers --------------------------------------------------------

LamSeq star_copower(const BasedObject& y, int N) {
    if (y.carrier.tag != GroundTag::FINSET)
        throw GroundError("star_copower: FINSET only");
    int base_idx = y.base.table[0];
    LamSeq d;
    d.tag = GroundTag::FINSET;
    d.N = N;
    auto level_labels = [&](int k) {
        std::vector<std::string> labels = {"w*"};
        for (int i = 1; i <= k; ++i)
            for (int yi = 0; yi < y.carrier.size(); ++yi) {
                if (yi == base_idx) continue;
                labels.push_back(std::to_string(i) + ":" + y.carrier.label(yi));
            }
        return labels;
    };
    for (int k = 0; k <= N; ++k)
        d.levels.push_back(GroundObject(GroundTag::FINSET, level_labels(k)));
    auto act_by = [&](int k, const BasedInjection& lambda) {
        // copy lambda(a) maps to copy a; copies outside the image go to base
        std::vector<int> back(k + 1, 0);
        for (int a = 1; a <= lambda.m; ++a) back[lambda(a)] = a;
        return from_label_fn(d.levels[k], d.levels[lambda.m], [&](const std::string& l) {
            if (l == "w*") return std::string("w*");
            size_t colon = l.find(':');
            int copy = std::stoi(l.substr(0, colon));
            if (back[copy] == 0) return std::string("w*");
            return std::to_string(back[copy]) + l.substr(colon);
        });
    };
    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        for (int i = 1; i < k; ++i) d.trans[k].push_back(act_by(k, adjacent_transposition(i, k)));
        for (int i = 1; i <= k; ++i) d.deg[k].push_back(act_by(k, skip_injection(i, k)));
    }
    d.base = from_label_fn(unit_object(GroundTag::FINSET), d.levels[0],
                           [](const std::string&) { return "w*"; });
    enable_act_cache(d);
    return d;
}

BasedObject smash(const BasedObject& y, const BasedObject& x) {
    if (y.carrier.tag != GroundTag::FINSET) throw GroundError("smash: FINSET only");
    int yb = y.base.table[0], xb = x.base.table[0];
    std::vector<std::string> labels = {"s*"};
    for (int yi = 0; yi < y.carrier.size(); ++yi) {
        if (yi == yb) continue;
        for (int xi = 0; xi < x.carrier.size(); ++xi) {
            if (xi == xb) continue;
            labels.push_back("(" + y.carrier.label(yi) + "^" + x.carrier.label(xi) + ")");
        }
    }
    return based(GroundObject(GroundTag::FINSET, std::move(labels)), "s*");
}

RhoSmash rho_smash(const BasedObject& y, const BasedObject& x, int N) {
    if (y.carrier.tag != GroundTag::FINSET || x.carrier.tag != GroundTag::FINSET)
        throw GroundError("rho_smash: FINSET only");
    RhoSmash out;
    out.star = star_copower(y, N);
    out.src = tensor_lambda(out.star, x);
    out.target = smash(y, x);
    int xb = x.base.table[0];
    GroundMorphism h = glue_from_sum(out.src.pre, out.target.carrier, [&](int ci) {
        int k = std::stoi(out.src.pre.comps[ci].key);
        const auto& fs = out.src.pre.comps[ci].factors;
        std::vector<int> table(out.src.pre.locals[ci].size());
        size_t total = table.size();
        std::vector<int> digits(fs.size(), 0);
        for (size_t flat = 0; flat < total; ++flat) {
            const std::string& wl = fs[0].label(digits[0]);
            int tgt = 0;  // base of the smash
            if (wl != "w*") {
                size_t colon = wl.find(':');
                int copy = std::stoi(wl.substr(0, colon));
                std::string ylab = wl.substr(colon + 1);
                int xi = digits[copy];  // the copy-th point
                if (xi != xb)
                    tgt = out.target.carrier.index_of("(" + ylab + "^" +
                                                      x.carrier.label(xi) + ")");
            }
            table[flat] = tgt;
            for (size_t s = fs.size(); s-- > 0;) {
                if (++digits[s] < fs[s].size()) break;
                digits[s] = 0;
            }
        }
        (void)k;
        return from_table(out.src.pre.locals[ci], out.target.carrier, std::move(table));
    });
    out.rho = factor_through(out.src.quot, h);
    return out;
}

GroundObject hom_object(const GroundObject& v, const GroundObject& w) {
    if (v.tag != GroundTag::FINSET) throw GroundError("hom_object: FINSET only");
    std::vector<std::string> labels;
    std::vector<int> images(v.size(), 0);
    bool done = v.size() == 0;
    auto label_of = [&]() {
        std::string l = "h";
        for (size_t i = 0; i < images.size(); ++i) {
            if (i) l += '.';
            l += std::to_string(images[i]);
        }
        return l;
    };
    if (v.size() == 0) return GroundObject(GroundTag::FINSET, {"h"});
    while (!done) {
        labels.push_back(label_of());
        done = true;
        for (size_t i = images.size(); i-- > 0;) {
            if (++images[i] < w.size()) {
                done = false;
                break;
            }
            images[i] = 0;
        }
    }
    return GroundObject(GroundTag::FINSET, std::move(labels));
}

namespace {

std::vector<int> hom_images(const std::string& label) {
    std::vector<int> out;
    size_t pos = 1;
    while (pos < label.size()) {
        size_t dot = label.find('.', pos);
        if (dot == std::string::npos) dot = label.size();
        out.push_back(std::stoi(label.substr(pos, dot - pos)));
        pos = dot + 1;
    }
    return out;
}

std::string hom_label(const std::vector<int>& images) {
    std::string l = "h";
    for (size_t i = 0; i < images.size(); ++i) {
        if (i) l += '.';
        l += std::to_string(images[i]);
    }
    return l;
}

}  // namespace

LamSeq hom_seq(const GroundObject& v, const LamSeq& d) {
    if (d.tag != GroundTag::FINSET) throw GroundError("hom_seq: FINSET only");
    LamSeq out;
    out.tag = GroundTag::FINSET;
    out.N = d.N;
    for (int n = 0; n <= d.N; ++n) out.levels.push_back(hom_object(v, d.levels[n]));
    auto post = [&](const GroundMorphism& g, int n, int m) {
        return from_label_fn(out.levels[n], out.levels[m], [&](const std::string& l) {
            std::vector<int> images = hom_images(l);
            for (auto& im : images) im = g.table[im];
            return hom_label(images);
        });
    };
    out.trans.resize(d.N + 1);
    out.deg.resize(d.N + 1);
    for (int n = 0; n <= d.N; ++n) {
        for (int i = 1; i < n; ++i) out.trans[n].push_back(post(d.trans[n][i - 1], n, n));
        for (int i = 1; i <= n; ++i) out.deg[n].push_back(post(d.deg[n][i - 1], n, n - 1));
    }
    int dbase = d.base.table[0];
    out.base = from_label_fn(unit_object(GroundTag::FINSET), out.levels[0],
                             [&](const std::string&) {
                                 return hom_label(std::vector<int>(v.size(), dbase));
                             });
    enable_act_cache(out);
    return out;
}

PhiHom phi_hom(const GroundObject& v, const LamSeq& d, const BasedObject& x) {
    PhiHom out;
    out.homd = hom_seq(v, d);
    out.src = tensor_lambda(out.homd, x);
    out.dx = tensor_lambda(d, x);
    out.target = hom_object(v, out.dx.result.carrier);
    GroundMorphism h = glue_from_sum(out.src.pre, out.target, [&](int ci) {
        int k = std::stoi(out.src.pre.comps[ci].key);
        const auto& fs = out.src.pre.comps[ci].factors;
        std::vector<int> table(out.src.pre.locals[ci].size());
        std::vector<int> digits(fs.size(), 0);
        for (size_t flat = 0; flat < table.size(); ++flat) {
            std::vector<int> images = hom_images(fs[0].label(digits[0]));
            std::vector<std::string> xs;
            for (int s = 1; s <= k; ++s) xs.push_back(x.carrier.label(digits[s]));
            std::vector<int> out_images;
            for (int im : images)
                out_images.push_back(out.dx.result.carrier.index_of(
                    out.dx.normal_form(k, d.levels[k].label(im), xs)));
            table[flat] = out.target.index_of(hom_label(out_images));
            for (size_t s = fs.size(); s-- > 0;) {
                if (++digits[s] < fs[s].size()) break;
                digits[s] = 0;
            }
        }
        return from_table(out.src.pre.locals[ci], out.target, std::move(table));
    });
    out.phi = factor_through(out.src.quot, h);
    return out;
}

}  // namespace forge
