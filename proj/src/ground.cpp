#include "forge/ground.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace forge {

std::string tag_name(GroundTag t) {
    return t == GroundTag::FINSET ? "FINSET" : "FINVEC";
}

static void require_same_tag(GroundTag a, GroundTag b, const char* where) {
    if (a != b) throw TagMismatchError(std::string(where) + ": mixed ground tags");
}

struct GroundObject::Rep {
    std::vector<std::string> labels;
    mutable std::unordered_map<std::string, int> index;
    mutable std::once_flag index_once;

    const std::unordered_map<std::string, int>& index_map() const {
        std::call_once(index_once, [this] {
            index.reserve(labels.size());
            for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
                auto [it, fresh] = index.emplace(labels[i], i);
                if (!fresh) throw GroundError("duplicate label '" + labels[i] + "' in ground object");
            }
        });
        return index;
    }
};

GroundObject::GroundObject() : rep_(std::make_shared<Rep>()) {}

GroundObject::GroundObject(GroundTag t, std::vector<std::string> ls) : tag(t) {
    auto rep = std::make_shared<Rep>();
    rep->labels = std::move(ls);
    rep_ = rep;
    // labels must be unique; building the index now surfaces duplicates early
    // only for small objects, large ones are validated on first lookup
    if (size() <= 4096) rep_->index_map();
}

const std::vector<std::string>& GroundObject::labels() const {
    return rep_->labels;
}

int GroundObject::index_of(const std::string& label) const {
    auto& idx = rep_->index_map();
    auto it = idx.find(label);
    return it == idx.end() ? -1 : it->second;
}

bool GroundObject::operator==(const GroundObject& o) const {
    if (tag != o.tag) return false;
    if (rep_ == o.rep_) return true;
    return rep_->labels == o.rep_->labels;
}

GroundObject unit_object(GroundTag tag) {
    return GroundObject(tag, {tag == GroundTag::FINSET ? "*" : "1"});
}

GroundObject initial_object(GroundTag tag) {
    return GroundObject(tag, {});
}

bool GroundMorphism::operator==(const GroundMorphism& o) const {
    if (tag != o.tag || !(source == o.source) || !(target == o.target)) return false;
    return tag == GroundTag::FINSET ? table == o.table : mat == o.mat;
}

GroundMorphism identity_morphism(const GroundObject& a) {
    GroundMorphism m;
    m.tag = a.tag;
    m.source = a;
    m.target = a;
    if (a.tag == GroundTag::FINSET) {
        m.table.resize(a.size());
        std::iota(m.table.begin(), m.table.end(), 0);
    } else {
        m.mat = Matrix::identity(a.size());
    }
    return m;
}

GroundMorphism compose(const GroundMorphism& g, const GroundMorphism& f) {
    require_same_tag(g.tag, f.tag, "compose");
    if (!(f.target == g.source)) throw GroundError("compose: middle objects differ");
    GroundMorphism m;
    m.tag = f.tag;
    m.source = f.source;
    m.target = g.target;
    if (m.tag == GroundTag::FINSET) {
        m.table.resize(f.table.size());
        for (size_t i = 0; i < f.table.size(); ++i) m.table[i] = g.table[f.table[i]];
    } else {
        m.mat = matmul(g.mat, f.mat);
    }
    return m;
}

bool is_identity(const GroundMorphism& f) {
    return f.source == f.target && f == identity_morphism(f.source);
}

bool is_isomorphism(const GroundMorphism& f) {
    if (f.tag == GroundTag::FINSET) {
        if (f.source.size() != f.target.size()) return false;
        std::vector<char> hit(f.table.size(), 0);
        for (int t : f.table) {
            if (hit[t]) return false;
            hit[t] = 1;
        }
        return true;
    }
    return is_invertible(f.mat);
}

GroundMorphism invert(const GroundMorphism& f) {
    if (!is_isomorphism(f)) throw GroundError("invert: morphism is not an isomorphism");
    GroundMorphism m;
    m.tag = f.tag;
    m.source = f.target;
    m.target = f.source;
    if (f.tag == GroundTag::FINSET) {
        m.table.resize(f.table.size());
        for (size_t i = 0; i < f.table.size(); ++i) m.table[f.table[i]] = static_cast<int>(i);
    } else {
        m.mat = inverse(f.mat);
    }
    return m;
}

GroundMorphism from_table(const GroundObject& src, const GroundObject& tgt, std::vector<int> table) {
    if (src.tag != GroundTag::FINSET || tgt.tag != GroundTag::FINSET)
        throw GroundError("from_table: FINSET only");
    if (static_cast<int>(table.size()) != src.size()) throw GroundError("from_table: table size mismatch");
    for (int t : table)
        if (t < 0 || t >= tgt.size()) throw GroundError("from_table: index out of range");
    GroundMorphism m;
    m.tag = GroundTag::FINSET;
    m.source = src;
    m.target = tgt;
    m.table = std::move(table);
    return m;
}

GroundMorphism from_matrix(const GroundObject& src, const GroundObject& tgt, Matrix mt) {
    if (src.tag != GroundTag::FINVEC || tgt.tag != GroundTag::FINVEC)
        throw GroundError("from_matrix: FINVEC only");
    if (mt.rows != tgt.size() || mt.cols != src.size())
        throw GroundError("from_matrix: matrix shape mismatch");
    GroundMorphism m;
    m.tag = GroundTag::FINVEC;
    m.source = src;
    m.target = tgt;
    m.mat = std::move(mt);
    return m;
}

GroundMorphism from_label_fn(const GroundObject& src, const GroundObject& tgt,
                             const std::function<std::string(const std::string&)>& fn) {
    if (src.tag == GroundTag::FINSET) {
        std::vector<int> table(src.size());
        for (int i = 0; i < src.size(); ++i) {
            std::string out = fn(src.label(i));
            int j = tgt.index_of(out);
            if (j < 0) throw GroundError("from_label_fn: label '" + out + "' not in target");
            table[i] = j;
        }
        return from_table(src, tgt, std::move(table));
    }
    Matrix mt(tgt.size(), src.size());
    for (int i = 0; i < src.size(); ++i) {
        std::string out = fn(src.label(i));
        int j = tgt.index_of(out);
        if (j < 0) throw GroundError("from_label_fn: label '" + out + "' not in target");
        mt.at(j, i) = 1;
    }
    return from_matrix(src, tgt, std::move(mt));
}

GroundMorphism from_columns(const GroundObject& src, const GroundObject& tgt,
                            const std::function<Column(int)>& fn) {
    if (src.tag == GroundTag::FINSET) {
        std::vector<int> table(src.size());
        for (int i = 0; i < src.size(); ++i) {
            Column c = fn(i);
            if (c.size() != 1 || c[0].second != 1)
                throw GroundError("from_columns: FINSET column must be a single unit entry");
            table[i] = c[0].first;
        }
        return from_table(src, tgt, std::move(table));
    }
    Matrix mt(tgt.size(), src.size());
    for (int i = 0; i < src.size(); ++i)
        for (auto& [j, coef] : fn(i)) mt.at(j, i) += coef;
    return from_matrix(src, tgt, std::move(mt));
}

GroundMorphism from_initial(const GroundObject& tgt) {
    GroundMorphism m;
    m.tag = tgt.tag;
    m.source = initial_object(tgt.tag);
    m.target = tgt;
    if (tgt.tag == GroundTag::FINVEC) m.mat = Matrix(tgt.size(), 0);
    return m;
}

// -- monoidal structure ------------------------------------------------------

std::string tuple_label(const std::vector<std::string>& parts) {
    std::string out = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    out += ')';
    return out;
}

GroundObject tensor_many(const std::vector<GroundObject>& factors) {
    if (factors.empty()) throw GroundError("tensor_many: empty factor list has no tag");
    GroundTag tag = factors[0].tag;
    for (auto& f : factors) require_same_tag(tag, f.tag, "tensor_many");
    if (factors.size() == 1) return factors[0];
    size_t total = 1;
    for (auto& f : factors) total *= static_cast<size_t>(f.size());
    std::vector<std::string> labels;
    labels.reserve(total);
    if (total > 0) {
        std::vector<int> idx(factors.size(), 0);
        std::vector<std::string> parts(factors.size());
        for (;;) {
            for (size_t k = 0; k < factors.size(); ++k) parts[k] = factors[k].label(idx[k]);
            labels.push_back(tuple_label(parts));
            int k = static_cast<int>(factors.size()) - 1;
            while (k >= 0 && ++idx[k] == factors[k].size()) idx[k--] = 0;
            if (k < 0) break;
        }
    }
    return GroundObject(tag, std::move(labels));
}

GroundMorphism tensor_many_morphisms(const std::vector<GroundMorphism>& factors) {
    if (factors.empty()) throw GroundError("tensor_many_morphisms: empty list");
    if (factors.size() == 1) return factors[0];
    GroundTag tag = factors[0].tag;
    std::vector<GroundObject> srcs, tgts;
    for (auto& f : factors) {
        require_same_tag(tag, f.tag, "tensor_many_morphisms");
        srcs.push_back(f.source);
        tgts.push_back(f.target);
    }
    GroundObject src = tensor_many(srcs), tgt = tensor_many(tgts);
    GroundMorphism m;
    m.tag = tag;
    m.source = src;
    m.target = tgt;
    if (tag == GroundTag::FINSET) {
        m.table.resize(src.size());
        // mixed-radix walk over source indices
        std::vector<int> idx(factors.size(), 0);
        for (int i = 0; i < src.size(); ++i) {
            int out = 0;
            for (size_t k = 0; k < factors.size(); ++k)
                out = out * tgts[k].size() + factors[k].table[idx[k]];
            m.table[i] = out;
            int k = static_cast<int>(factors.size()) - 1;
            while (k >= 0 && ++idx[k] == srcs[k].size()) idx[k--] = 0;
        }
    } else {
        Matrix acc = factors[0].mat;
        for (size_t k = 1; k < factors.size(); ++k) acc = kronecker(acc, factors[k].mat);
        m.mat = std::move(acc);
    }
    return m;
}

GroundObject tensor(const GroundObject& a, const GroundObject& b) {
    return tensor_many({a, b});
}

GroundMorphism tensor(const GroundMorphism& f, const GroundMorphism& g) {
    return tensor_many_morphisms({f, g});
}

GroundMorphism left_unitor(const GroundObject& a) {
    GroundObject src = tensor(unit_object(a.tag), a);
    GroundMorphism m;
    m.tag = a.tag;
    m.source = src;
    m.target = a;
    if (a.tag == GroundTag::FINSET) {
        m.table.resize(a.size());
        std::iota(m.table.begin(), m.table.end(), 0);
    } else {
        m.mat = Matrix::identity(a.size());
    }
    return m;
}

GroundMorphism right_unitor(const GroundObject& a) {
    GroundObject src = tensor(a, unit_object(a.tag));
    GroundMorphism m;
    m.tag = a.tag;
    m.source = src;
    m.target = a;
    if (a.tag == GroundTag::FINSET) {
        m.table.resize(a.size());
        std::iota(m.table.begin(), m.table.end(), 0);
    } else {
        m.mat = Matrix::identity(a.size());
    }
    return m;
}

GroundMorphism braiding(const GroundObject& a, const GroundObject& b) {
    return factor_permute({a, b}, {1, 0});
}

GroundMorphism factor_permute(const std::vector<GroundObject>& factors, const std::vector<int>& perm) {
    if (factors.size() != perm.size()) throw GroundError("factor_permute: size mismatch");
    size_t k = factors.size();
    std::vector<GroundObject> permuted(k, GroundObject{});
    for (size_t i = 0; i < k; ++i) permuted[perm[i]] = factors[i];
    GroundObject src = tensor_many(factors), tgt = tensor_many(permuted);

    std::vector<size_t> src_stride(k, 1), tgt_stride(k, 1);
    for (size_t i = k; i-- > 1;) src_stride[i - 1] = src_stride[i] * factors[i].size();
    for (size_t i = k; i-- > 1;) tgt_stride[i - 1] = tgt_stride[i] * permuted[i].size();

    auto map_index = [&](int s) {
        size_t rem = static_cast<size_t>(s), out = 0;
        for (size_t i = 0; i < k; ++i) {
            size_t digit = rem / src_stride[i];
            rem %= src_stride[i];
            out += digit * tgt_stride[perm[i]];
        }
        return static_cast<int>(out);
    };

    if (src.tag == GroundTag::FINSET) {
        std::vector<int> table(src.size());
        for (int i = 0; i < src.size(); ++i) table[i] = map_index(i);
        return from_table(src, tgt, std::move(table));
    }
    Matrix mt(tgt.size(), src.size());
    for (int i = 0; i < src.size(); ++i) mt.at(map_index(i), i) = 1;
    return from_matrix(src, tgt, std::move(mt));
}

GroundMorphism grouped_tensor_map(GroundTag tag, const std::vector<GroundObject>& src_factors,
                                  const std::vector<GroundObject>& tgt_factors,
                                  const std::vector<TensorGroup>& groups,
                                  const std::vector<std::pair<int, GroundMorphism>>& drops) {
    size_t ks = src_factors.size(), kt = tgt_factors.size();
    if (groups.size() != kt) throw GroundError("grouped_tensor_map: one group per target slot");
    std::vector<int> used(ks, 0);
    for (size_t t = 0; t < kt; ++t) {
        const TensorGroup& g = groups[t];
        std::vector<GroundObject> srcs;
        for (int s : g.sources) {
            if (s < 0 || s >= static_cast<int>(ks) || used[s]++)
                throw GroundError("grouped_tensor_map: bad group source");
            srcs.push_back(src_factors[s]);
        }
        GroundObject expect = srcs.empty() ? unit_object(tag) : tensor_many(srcs);
        if (!(g.piece.source == expect) || !(g.piece.target == tgt_factors[t]))
            throw GroundError("grouped_tensor_map: piece endpoints mismatch at slot " +
                              std::to_string(t));
    }
    for (auto& [s, fn] : drops) {
        if (s < 0 || s >= static_cast<int>(ks) || used[s]++)
            throw GroundError("grouped_tensor_map: bad drop source");
        if (!(fn.source == src_factors[s]) || !(fn.target == unit_object(tag)))
            throw GroundError("grouped_tensor_map: drop must map the factor to I");
    }
    for (size_t s = 0; s < ks; ++s)
        if (!used[s]) throw GroundError("grouped_tensor_map: source factor not consumed");

    GroundObject src = src_factors.empty() ? unit_object(tag) : tensor_many(src_factors);
    GroundObject tgt = tgt_factors.empty() ? unit_object(tag) : tensor_many(tgt_factors);

    std::vector<size_t> src_stride(ks, 1), tgt_stride(kt, 1);
    for (size_t i = ks; i-- > 1;) src_stride[i - 1] = src_stride[i] * src_factors[i].size();
    for (size_t i = kt; i-- > 1;) tgt_stride[i - 1] = tgt_stride[i] * tgt_factors[i].size();

    // local flat index of a group's sources for a given source digit vector
    auto group_local = [&](const TensorGroup& g, const std::vector<int>& digit) {
        size_t local = 0;
        for (int s : g.sources) local = local * src_factors[s].size() + digit[s];
        return static_cast<int>(local);
    };

    if (tag == GroundTag::FINSET) {
        std::vector<int> table(src.size());
        std::vector<int> digit(ks);
        for (int i = 0; i < src.size(); ++i) {
            size_t rem = static_cast<size_t>(i);
            for (size_t s = 0; s < ks; ++s) {
                digit[s] = static_cast<int>(rem / src_stride[s]);
                rem %= src_stride[s];
            }
            size_t out = 0;
            for (size_t t = 0; t < kt; ++t)
                out += static_cast<size_t>(groups[t].piece.table[group_local(groups[t], digit)]) *
                       tgt_stride[t];
            table[i] = static_cast<int>(out);
        }
        return from_table(src, tgt, std::move(table));
    }

    Matrix mt(tgt.size(), src.size());
    std::vector<int> digit(ks);
    std::vector<std::pair<size_t, Rational>> acc, next;
    for (int i = 0; i < src.size(); ++i) {
        size_t rem = static_cast<size_t>(i);
        for (size_t s = 0; s < ks; ++s) {
            digit[s] = static_cast<int>(rem / src_stride[s]);
            rem %= src_stride[s];
        }
        Rational scale(1);
        for (auto& [s, fn] : drops) scale *= fn.mat.at(0, digit[s]);
        if (scale == 0) continue;
        acc.assign(1, {0, scale});
        for (size_t t = 0; t < kt && !acc.empty(); ++t) {
            int col = group_local(groups[t], digit);
            next.clear();
            for (int r = 0; r < groups[t].piece.mat.rows; ++r) {
                const Rational& c = groups[t].piece.mat.at(r, col);
                if (c == 0) continue;
                for (auto& [base, coef] : acc)
                    next.emplace_back(base + static_cast<size_t>(r) * tgt_stride[t], coef * c);
            }
            std::swap(acc, next);
        }
        for (auto& [row, coef] : acc) mt.at(static_cast<int>(row), i) += coef;
    }
    return from_matrix(src, tgt, std::move(mt));
}

GroundMorphism tensor_map(GroundTag tag, const std::vector<GroundObject>& src_factors,
                          const std::vector<GroundObject>& tgt_factors,
                          const std::vector<int>& placement,
                          const std::vector<GroundMorphism>& pieces,
                          const std::vector<TensorInsert>& inserts) {
    size_t ks = src_factors.size(), kt = tgt_factors.size();
    if (placement.size() != ks || pieces.size() != ks)
        throw GroundError("tensor_map: placement/pieces size mismatch");
    std::vector<TensorGroup> groups(kt);
    std::vector<std::pair<int, GroundMorphism>> drops;
    for (size_t s = 0; s < ks; ++s) {
        if (placement[s] == -1) {
            drops.emplace_back(static_cast<int>(s), pieces[s]);
            continue;
        }
        if (placement[s] < 0 || placement[s] >= static_cast<int>(kt))
            throw GroundError("tensor_map: bad placement");
        groups[placement[s]] = TensorGroup{{static_cast<int>(s)}, pieces[s]};
    }
    for (auto& ins : inserts) {
        if (ins.slot < 0 || ins.slot >= static_cast<int>(kt))
            throw GroundError("tensor_map: bad insert slot");
        groups[ins.slot] = TensorGroup{{}, ins.unit_map};
    }
    return grouped_tensor_map(tag, src_factors, tgt_factors, groups, drops);
}

// -- colimits -----------------------------------------------------------------

Coproduct coproduct_many(const std::vector<GroundObject>& parts) {
    if (parts.empty()) throw GroundError("coproduct_many: empty list has no tag");
    GroundTag tag = parts[0].tag;
    std::vector<std::string> labels;
    for (size_t p = 0; p < parts.size(); ++p) {
        require_same_tag(tag, parts[p].tag, "coproduct_many");
        for (auto& l : parts[p].labels()) labels.push_back(std::to_string(p) + ":" + l);
    }
    GroundObject ob(tag, std::move(labels));
    Coproduct out{ob, {}};
    int offset = 0;
    for (auto& part : parts) {
        GroundMorphism inj;
        inj.tag = tag;
        inj.source = part;
        inj.target = ob;
        if (tag == GroundTag::FINSET) {
            inj.table.resize(part.size());
            std::iota(inj.table.begin(), inj.table.end(), offset);
        } else {
            inj.mat = Matrix(ob.size(), part.size());
            for (int i = 0; i < part.size(); ++i) inj.mat.at(offset + i, i) = 1;
        }
        out.injections.push_back(std::move(inj));
        offset += part.size();
    }
    return out;
}

Coproduct coproduct(const GroundObject& a, const GroundObject& b) {
    return coproduct_many({a, b});
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

}  // namespace

Coequalizer coequalize_pairs(const GroundObject& target,
                             const std::vector<std::pair<int, int>>& glue) {
    if (target.tag != GroundTag::FINSET) throw GroundError("coequalize_pairs: FINSET only");
    UnionFind uf(target.size());
    for (auto& [a, b] : glue) uf.unite(a, b);

    // least label in each class is the representative
    std::vector<int> rep(target.size(), -1);
    for (int i = 0; i < target.size(); ++i) {
        int r = uf.find(i);
        if (rep[r] < 0 || target.label(i) < target.label(rep[r])) rep[r] = i;
    }
    std::vector<int> cls_index(target.size(), -1);
    std::vector<std::string> labels;
    std::vector<int> reps;
    for (int i = 0; i < target.size(); ++i) {
        if (rep[uf.find(i)] == i) {
            cls_index[uf.find(i)] = static_cast<int>(labels.size());
            labels.push_back(target.label(i));
            reps.push_back(i);
        }
    }
    GroundObject q(GroundTag::FINSET, std::move(labels));
    std::vector<int> proj_table(target.size());
    for (int i = 0; i < target.size(); ++i) proj_table[i] = cls_index[uf.find(i)];
    Coequalizer out;
    out.ob = q;
    out.proj = from_table(target, q, std::move(proj_table));
    out.section = from_table(q, target, std::move(reps));
    return out;
}

Coequalizer coequalize_rows(const GroundObject& target, const std::vector<Column>& rows) {
    if (target.tag != GroundTag::FINVEC) throw GroundError("coequalize_rows: FINVEC only");
    int dim = target.size();
    Matrix rel(static_cast<int>(rows.size()), dim);
    for (size_t r = 0; r < rows.size(); ++r)
        for (auto& [i, c] : rows[r]) rel.at(static_cast<int>(r), i) += c;
    std::vector<int> pivots = rref(rel);

    std::vector<char> is_pivot(dim, 0);
    for (int p : pivots) is_pivot[p] = 1;
    std::vector<std::string> labels;
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i)
        if (!is_pivot[i]) {
            labels.push_back(target.label(i));
            keep.push_back(i);
        }
    GroundObject q(GroundTag::FINVEC, std::move(labels));

    // projection: e_j -> q_j for kept j; pivot e_p -> -sum of its rref row over kept columns
    Matrix proj(q.size(), dim);
    for (int j = 0; j < static_cast<int>(keep.size()); ++j) proj.at(j, keep[j]) = 1;
    for (int pi = 0; pi < static_cast<int>(pivots.size()); ++pi) {
        int p = pivots[pi];
        for (int j = 0; j < static_cast<int>(keep.size()); ++j)
            proj.at(j, p) = -rel.at(pi, keep[j]);
    }
    Matrix sect(dim, q.size());
    for (int j = 0; j < static_cast<int>(keep.size()); ++j) sect.at(keep[j], j) = 1;

    Coequalizer out;
    out.ob = q;
    out.proj = from_matrix(target, q, std::move(proj));
    out.section = from_matrix(q, target, std::move(sect));
    return out;
}

Coequalizer coequalizer_many(const std::vector<std::pair<GroundMorphism, GroundMorphism>>& pairs,
                             const GroundObject& target) {
    for (auto& [f, g] : pairs) {
        require_same_tag(f.tag, target.tag, "coequalizer");
        if (!(f.source == g.source) || !(f.target == g.target) || !(f.target == target))
            throw GroundError("coequalizer: maps are not a parallel pair into the target");
    }
    if (target.tag == GroundTag::FINSET) {
        std::vector<std::pair<int, int>> glue;
        for (auto& [f, g] : pairs)
            for (size_t i = 0; i < f.table.size(); ++i) glue.emplace_back(f.table[i], g.table[i]);
        return coequalize_pairs(target, glue);
    }
    std::vector<Column> rows;
    for (auto& [f, g] : pairs)
        for (int c = 0; c < f.mat.cols; ++c) {
            Column row;
            for (int i = 0; i < target.size(); ++i) {
                Rational v = f.mat.at(i, c) - g.mat.at(i, c);
                if (v != 0) row.emplace_back(i, v);
            }
            rows.push_back(std::move(row));
        }
    return coequalize_rows(target, rows);
}

Coequalizer coequalizer(const GroundMorphism& f, const GroundMorphism& g) {
    return coequalizer_many({{f, g}}, f.target);
}

GroundMorphism factor_through(const Coequalizer& coeq, const GroundMorphism& h) {
    if (!(h.source == coeq.proj.source)) throw GroundError("factor_through: source mismatch");
    GroundMorphism u = compose(h, coeq.section);
    if (!(compose(u, coeq.proj) == h))
        throw GroundError("factor_through: map does not coequalize the relations");
    return u;
}

// -- based objects ------------------------------------------------------------

BasedObject based(const GroundObject& carrier, const std::string& base_label) {
    int idx = carrier.index_of(base_label);
    if (idx < 0) throw GroundError("based: base label '" + base_label + "' not in carrier");
    return BasedObject{carrier,
                       from_label_fn(unit_object(carrier.tag), carrier,
                                     [&](const std::string&) { return base_label; })};
}

BasedObject based_unit(GroundTag tag) {
    GroundObject u = unit_object(tag);
    return BasedObject{u, identity_morphism(u)};
}

GroundObject linearize(const GroundObject& a) {
    if (a.tag != GroundTag::FINSET) throw GroundError("linearize: FINSET input expected");
    return GroundObject(GroundTag::FINVEC, a.labels());
}

GroundMorphism linearize(const GroundMorphism& f) {
    if (f.tag != GroundTag::FINSET) throw GroundError("linearize: FINSET input expected");
    Matrix mt(f.target.size(), f.source.size());
    for (size_t i = 0; i < f.table.size(); ++i) mt.at(f.table[i], static_cast<int>(i)) = 1;
    return from_matrix(linearize(f.source), linearize(f.target), std::move(mt));
}

BasedObject linearize(const BasedObject& x) {
    return BasedObject{linearize(x.carrier), linearize(x.base)};
}

// -- partial morphisms --------------------------------------------------------

bool PartialMorphism::total() const {
    for (char d : defined)
        if (!d) return false;
    return true;
}

PartialMorphism as_partial(const GroundMorphism& f) {
    return PartialMorphism{f, std::vector<char>(f.source.size(), 1)};
}

PartialMorphism compose(const PartialMorphism& g, const PartialMorphism& f) {
    PartialMorphism out;
    out.map.tag = f.map.tag;
    out.map.source = f.map.source;
    out.map.target = g.map.target;
    out.defined.assign(f.map.source.size(), 0);
    if (f.map.tag == GroundTag::FINSET) {
        out.map.table.assign(f.map.source.size(), -1);
        for (int i = 0; i < f.map.source.size(); ++i) {
            if (!f.defined[i]) continue;
            int mid = f.map.table[i];
            if (!g.defined[mid]) continue;
            out.map.table[i] = g.map.table[mid];
            out.defined[i] = 1;
        }
    } else {
        out.map.mat = Matrix(g.map.target.size(), f.map.source.size());
        for (int i = 0; i < f.map.source.size(); ++i) {
            if (!f.defined[i]) continue;
            bool ok = true;
            for (int m = 0; m < f.map.target.size(); ++m)
                if (f.map.mat.at(m, i) != 0 && !g.defined[m]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            out.defined[i] = 1;
            for (int r = 0; r < g.map.target.size(); ++r) {
                Rational acc = 0;
                for (int m = 0; m < f.map.target.size(); ++m)
                    if (f.map.mat.at(m, i) != 0) acc += g.map.mat.at(r, m) * f.map.mat.at(m, i);
                out.map.mat.at(r, i) = acc;
            }
        }
    }
    return out;
}

bool agree_where_defined(const PartialMorphism& f, const PartialMorphism& g, int* compared) {
    if (!(f.map.source == g.map.source) || !(f.map.target == g.map.target))
        throw GroundError("agree_where_defined: shape mismatch");
    int n = f.map.source.size(), cnt = 0;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
        if (!f.defined[i] || !g.defined[i]) continue;
        ++cnt;
        if (f.map.tag == GroundTag::FINSET) {
            if (f.map.table[i] != g.map.table[i]) ok = false;
        } else {
            for (int r = 0; r < f.map.target.size() && ok; ++r)
                if (f.map.mat.at(r, i) != g.map.mat.at(r, i)) ok = false;
        }
        if (!ok) break;
    }
    if (compared) *compared = cnt;
    return ok;
}

}  // namespace forge
