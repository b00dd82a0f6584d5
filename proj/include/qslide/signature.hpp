#pragma once
// Signature arithmetic: the prefix-sum characterisation, excess, reducing
// sets, and the irreducible / quasi-irreducible / strictly-reducible
// taxonomy. Signatures are raw tuples; ordering (sorting) is always an
// explicit, separate step so direction indices stay meaningful.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qslide {

using Signature = std::vector<int>;

// true iff some spanning tree of Q_n (n = t.size()) has this signature;
// arbitrary tuples accepted, malformed ones are simply false
bool is_signature(const std::vector<long long>& t);
bool is_signature(const Signature& t);

// throws std::invalid_argument when !is_signature(s)
void require_signature(const Signature& s);

// minimum over |K| = k of sum_{i in K} a_i, minus (2^k - 1); k is 1-indexed
long long excess(const Signature& s, int k);

// all proper nonempty R (bitmask over 0-indexed directions) with
// sum_{i in R} a_i == 2^|R| - 1, ascending by size then lexicographic by
// element list
std::vector<std::uint32_t> reducing_sets(const Signature& s);

enum class SignatureKind { Irreducible, QuasiIrreducible, StrictlyReducible };

std::string to_string(SignatureKind k);

struct Classification {
    SignatureKind kind = SignatureKind::Irreducible;
    // least r < n with excess zero on [r, n], 1-indexed; absent when unsaturated
    std::optional<int> saturated_above;
    int unsaturated_len = 0;  // s: length of the unsaturated part
    bool supersaturated = false;
};

Classification classify(const Signature& s);

struct UnsatSelection {
    Signature part;            // entries in original order
    std::vector<int> indices;  // 0-indexed positions selected
    // true when selecting entries below the 2^(s-1) threshold would pick a
    // different index set than selection by sorted position (happens exactly
    // when s = 1, i.e. for supersaturated-type tuples); selection by sorted
    // position wins
    bool threshold_mismatch = false;
};

UnsatSelection unsaturated_selection(const Signature& s);
Signature unsaturated_part(const Signature& s);

// all nondecreasing valid signatures of Q_n, lexicographic
std::vector<Signature> enumerate_ordered_signatures(int n);

Signature sorted_signature(const Signature& s);

// "2,2,3" <-> {2,2,3}
std::string signature_to_string(const Signature& s);
Signature parse_signature(const std::string& text);

}  // namespace qslide
