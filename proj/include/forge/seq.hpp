#pragma once

#include "forge/combinat.hpp"
#include "forge/ground.hpp"
#include "forge/report.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace forge {

inline constexpr int kDefaultTruncation = 3;
inline constexpr int kMaxTruncation = 5;

/// Contravariant functor on Sigma, truncated at level N. Actions are stored on
/// the adjacent transpositions; arbitrary permutations act through their
/// decomposition (well defined by the validated Coxeter relations).
struct SymSeq {
    GroundTag tag = GroundTag::FINSET;
    int N = kDefaultTruncation;
    std::vector<GroundObject> levels;                // 0..N
    std::vector<std::vector<GroundMorphism>> trans;  // trans[n][i-1] = s_i action, level n -> n

    const GroundObject& level(int n) const;
};

struct ActCache {
    std::mutex mu;
    std::map<std::pair<int, std::string>, GroundMorphism> memo;
};

/// SymSeq plus degeneracies (actions of the ordered injections) and a base map.
struct LamSeq {
    GroundTag tag = GroundTag::FINSET;
    int N = kDefaultTruncation;
    std::vector<GroundObject> levels;
    std::vector<std::vector<GroundMorphism>> trans;
    std::vector<std::vector<GroundMorphism>> deg;  // deg[n][i-1]: level n -> n-1, 1 <= i <= n
    GroundMorphism base;                           // I -> level 0
    bool approx = false;  // set when a computation clipped structure above N

    mutable std::shared_ptr<ActCache> cache;

    const GroundObject& level(int n) const;
    SymSeq to_sym() const;
};

bool seq_equal(const LamSeq& a, const LamSeq& b);  // ignores approx flag and cache
bool seq_equal(const SymSeq& a, const SymSeq& b);

/// Right action of sigma in Sigma_n: level n -> level n.
GroundMorphism act_perm(const SymSeq& s, int n, const BasedInjection& sigma);
GroundMorphism act_perm(const LamSeq& s, int n, const BasedInjection& sigma);

/// Contravariant evaluation on lambda in Lambda(m, n): level n -> level m.
GroundMorphism act(const LamSeq& s, const BasedInjection& lambda);

void enable_act_cache(LamSeq& s);

Report validate(const SymSeq& s);
Report validate(const LamSeq& s);

/// I at level 0 and the initial object above.
LamSeq I0(GroundTag tag, int N);
/// I at levels 0 and 1, with identity degeneracy; the Kelly unit.
LamSeq I1(GroundTag tag, int N);

enum class EmbedMode { i0, i1 };
LamSeq embed(const BasedObject& x, EmbedMode mode, int N);
BasedObject p0(const LamSeq& d);

bool is_unital(const LamSeq& d);  // base map is an isomorphism onto level 0

LamSeq re_truncate(const LamSeq& d, int new_N);
/// Extends a sequence by the initial object above its stored levels (the
/// functor the truncated data determines on the nose).
LamSeq extend_by_initial(const LamSeq& d, int new_N);
LamSeq linearize(const LamSeq& d);

/// Per-level morphism of sequences commuting with the generator actions and base maps.
struct SeqMorphism {
    LamSeq source;
    LamSeq target;
    std::vector<GroundMorphism> at;  // 0..N

    bool is_isomorphism() const;
};

SeqMorphism seq_identity(const LamSeq& d);
SeqMorphism seq_compose(const SeqMorphism& g, const SeqMorphism& f);
SeqMorphism seq_invert(const SeqMorphism& f);
Report validate(const SeqMorphism& f);

}  // namespace forge
