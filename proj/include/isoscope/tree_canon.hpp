#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "isoscope/conllu.hpp"

namespace isoscope {

using BigInt = boost::multiprecision::cpp_int;

// Rooted dependency tree over nodes 1..n. parent[i] is the parent of
// node i+1, with 0 marking the root.
struct DepTree {
    int n = 0;
    std::vector<int> parent;

    bool operator==(const DepTree&) const = default;
};

// Canonical balanced-parenthesis encoding of an unlabelled tree; two
// trees receive equal codes iff they are isomorphic (under the mode the
// code was produced for).
struct CanonCode {
    std::string text;

    auto operator<=>(const CanonCode&) const = default;
};

enum class IsoMode { Directed, Undirected };

// Set of canonical shapes observed in a training treebank.
struct IsoClassSet {
    IsoMode mode = IsoMode::Directed;
    std::unordered_set<std::string> codes;

    std::size_t size() const { return codes.size(); }
    bool contains(const CanonCode& c) const { return codes.count(c.text) > 0; }
};

// Parent array from the heads of the syntactic words of a sentence.
// Throws TreeError on zero roots, multiple roots, or a head cycle.
DepTree build_tree(const Sentence& s);

// AHU encoding: code(leaf) = "()", code(v) = '(' + children's codes in
// lexicographically sorted order + ')'. Equal codes <=> rooted-tree
// isomorphism.
CanonCode canon_rooted(const DepTree& t);

// Undirected canonical form: edge direction is forgotten, the 1 or 2
// tree centers are found by iterative leaf stripping, and the
// lexicographically smaller rooted code over the centers is returned.
CanonCode canon_unrooted(const DepTree& t);

CanonCode canonical_code(const DepTree& t, IsoMode mode);

IsoClassSet iso_class_set(std::span<const DepTree> trees, IsoMode mode);

// Proportion of test trees whose rooted shape occurs in the training
// set; in [0, 1]. Requires a directed training set and a non-empty
// test list.
double dug(const IsoClassSet& train, std::span<const DepTree> test);

// Undirected variant; uug >= dug on the same treebank pair.
double uug(const IsoClassSet& train, std::span<const DepTree> test);

// Number of unlabelled rooted trees on n nodes, computed exactly with
// the Euler-transform recurrence (values exceed 64 bits near n = 40).
BigInt count_rooted_trees(int n);

// All distinct rooted canonical codes on n nodes, sorted; the list has
// exactly count_rooted_trees(n) entries. Supported for 1 <= n <= 12.
std::vector<CanonCode> enumerate_rooted_trees(int n);

// Exhaustive-permutation isomorphism test, the oracle against which the
// canonical codes are validated. Supported for n <= 8.
bool is_isomorphic_bruteforce(const DepTree& a, const DepTree& b, IsoMode mode);

} // namespace isoscope
