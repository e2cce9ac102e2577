#pragma once

#include "forge/rational.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace forge {

struct GroundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TagMismatchError : GroundError {
    using GroundError::GroundError;
};
struct TruncationError : GroundError {
    using GroundError::GroundError;
};

enum class GroundTag { FINSET, FINVEC };

std::string tag_name(GroundTag t);

/// An object of the ground category: element labels (FINSET) or basis labels (FINVEC).
/// Labels are unique and their order is part of the object's identity. Copies
/// share one immutable representation; the label index is built on first use.
struct GroundObject {
    GroundTag tag = GroundTag::FINSET;

    GroundObject();
    GroundObject(GroundTag t, std::vector<std::string> ls);

    const std::vector<std::string>& labels() const;
    const std::string& label(int i) const { return labels()[i]; }
    int size() const { return static_cast<int>(labels().size()); }
    int index_of(const std::string& label) const;  // -1 if absent
    bool operator==(const GroundObject& o) const;

private:
    struct Rep;
    std::shared_ptr<const Rep> rep_;
};

GroundObject unit_object(GroundTag tag);     // I: singleton {*} / one-dimensional {1}
GroundObject initial_object(GroundTag tag);  // empty set / zero space

/// Arrow of the ground category: total function table (FINSET) or matrix (FINVEC).
struct GroundMorphism {
    GroundTag tag = GroundTag::FINSET;
    GroundObject source;
    GroundObject target;
    std::vector<int> table;  // FINSET: table[i] = target index of source element i
    Matrix mat;              // FINVEC: target-dim x source-dim

    bool operator==(const GroundMorphism& o) const;
};

GroundMorphism identity_morphism(const GroundObject& a);
GroundMorphism compose(const GroundMorphism& g, const GroundMorphism& f);  // g after f
bool is_identity(const GroundMorphism& f);
bool is_isomorphism(const GroundMorphism& f);
GroundMorphism invert(const GroundMorphism& f);

GroundMorphism from_table(const GroundObject& src, const GroundObject& tgt, std::vector<int> table);
GroundMorphism from_matrix(const GroundObject& src, const GroundObject& tgt, Matrix m);

/// Builds the morphism sending each source label to the given target label
/// (a one-hot column in FINVEC).
GroundMorphism from_label_fn(const GroundObject& src, const GroundObject& tgt,
                             const std::function<std::string(const std::string&)>& fn);

/// Sparse column: list of (target index, coefficient). FINSET columns have one entry
/// with coefficient 1.
using Column = std::vector<std::pair<int, Rational>>;
GroundMorphism from_columns(const GroundObject& src, const GroundObject& tgt,
                            const std::function<Column(int)>& fn);

/// The unique morphism out of the initial object.
GroundMorphism from_initial(const GroundObject& tgt);

// -- monoidal structure ------------------------------------------------------

std::string tuple_label(const std::vector<std::string>& parts);

/// n-fold tensor with flat tuple labels "(a,b,c)", lexicographic (first factor
/// most significant). Empty list gives I, singleton list gives the object itself.
GroundObject tensor_many(const std::vector<GroundObject>& factors);
GroundMorphism tensor_many_morphisms(const std::vector<GroundMorphism>& factors);

GroundObject tensor(const GroundObject& a, const GroundObject& b);
GroundMorphism tensor(const GroundMorphism& f, const GroundMorphism& g);

GroundMorphism left_unitor(const GroundObject& a);    // I (x) A -> A
GroundMorphism right_unitor(const GroundObject& a);   // A (x) I -> A
GroundMorphism braiding(const GroundObject& a, const GroundObject& b);  // A(x)B -> B(x)A

/// Permutes the factors of a flat tensor: factor at position i moves to position perm[i]
/// (both 0-based); returns tensor_many(factors) -> tensor_many(permuted factors).
GroundMorphism factor_permute(const std::vector<GroundObject>& factors, const std::vector<int>& perm);

struct TensorInsert {
    int slot;                 // 0-based target slot
    GroundMorphism unit_map;  // I -> Y for the inserted factor
};

/// General map between flat tensors: source factor s goes to target slot
/// placement[s] through pieces[s]; target slots not hit by the placement are
/// filled by unit insertions. Empty factor lists denote the unit object.
GroundMorphism tensor_map(GroundTag tag, const std::vector<GroundObject>& src_factors,
                          const std::vector<GroundObject>& tgt_factors,
                          const std::vector<int>& placement,
                          const std::vector<GroundMorphism>& pieces,
                          const std::vector<TensorInsert>& inserts = {});

/// One target slot fed by the tensor of several source factors (in the listed
/// order) through `piece`. An empty source list inserts piece: I -> target.
struct TensorGroup {
    std::vector<int> sources;
    GroundMorphism piece;
};

/// The fully general flat-tensor map: groups[t] feeds target slot t; sources
/// listed in no group are dropped through the given functionals to I (every
/// FINSET functional is the unique collapse; FINVEC drops scale coefficients).
GroundMorphism grouped_tensor_map(GroundTag tag, const std::vector<GroundObject>& src_factors,
                                  const std::vector<GroundObject>& tgt_factors,
                                  const std::vector<TensorGroup>& groups,
                                  const std::vector<std::pair<int, GroundMorphism>>& drops = {});

// -- colimits -----------------------------------------------------------------

struct Coproduct {
    GroundObject ob;
    std::vector<GroundMorphism> injections;
};

Coproduct coproduct_many(const std::vector<GroundObject>& parts);
Coproduct coproduct(const GroundObject& a, const GroundObject& b);

struct Coequalizer {
    GroundObject ob;       // Q
    GroundMorphism proj;   // pi: target(f) -> Q
    GroundMorphism section;  // s: Q -> target(f), canonical representatives, proj o s = id
};

/// Coequalizer of a parallel pair. FINSET: union-find with least-label
/// representatives. FINVEC: quotient by span{f(e) - g(e)} via exact row
/// reduction, representative basis = non-pivot coordinates.
Coequalizer coequalizer(const GroundMorphism& f, const GroundMorphism& g);

/// Simultaneous coequalizer of several parallel pairs into the same target.
Coequalizer coequalizer_many(const std::vector<std::pair<GroundMorphism, GroundMorphism>>& pairs,
                             const GroundObject& target);

/// Raw-relation forms (the relation domains never get materialized as objects).
Coequalizer coequalize_pairs(const GroundObject& target,
                             const std::vector<std::pair<int, int>>& glue);
Coequalizer coequalize_rows(const GroundObject& target, const std::vector<Column>& rows);

/// Factors h through the coequalizer projection: returns u with u o proj = h.
/// Throws if h does not coequalize the defining relations.
GroundMorphism factor_through(const Coequalizer& coeq, const GroundMorphism& h);

// -- based objects ------------------------------------------------------------

struct BasedObject {
    GroundObject carrier;
    GroundMorphism base;  // I -> carrier

    bool operator==(const BasedObject& o) const { return carrier == o.carrier && base == o.base; }
};

BasedObject based(const GroundObject& carrier, const std::string& base_label);
BasedObject based_unit(GroundTag tag);  // (I, id)

/// FINSET to FINVEC change of ground: free vector space on the labels.
GroundObject linearize(const GroundObject& a);
GroundMorphism linearize(const GroundMorphism& f);
BasedObject linearize(const BasedObject& x);

// -- partial morphisms --------------------------------------------------------

/// A morphism defined only on part of its source (used where truncation clips
/// structure maps). Undefined FINSET entries hold -1, undefined FINVEC columns zero.
struct PartialMorphism {
    GroundMorphism map;
    std::vector<char> defined;  // per source label / basis index

    bool total() const;
};

PartialMorphism as_partial(const GroundMorphism& f);
PartialMorphism compose(const PartialMorphism& g, const PartialMorphism& f);

/// Equality of two partial morphisms on the intersection of their domains;
/// returns number of compared entries through `compared` when non-null.
bool agree_where_defined(const PartialMorphism& f, const PartialMorphism& g, int* compared = nullptr);

}  // namespace forge
