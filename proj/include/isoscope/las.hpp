#pragma once

#include <optional>
#include <string>

#include "isoscope/conllu.hpp"

namespace isoscope {

struct LasResult {
    long long correct = 0;
    long long total = 0;
    double score = 0.0;
};

// Dependency label with its subtype stripped ("nsubj:pass" -> "nsubj").
std::string strip_subtype(const std::string& deprel);

// Labeled attachment score under the gold-tokenization assumption: the
// treebanks must pair up 1:1 in sentences and word counts (else
// AlignmentError naming the sentence index). A word counts as correct
// iff its predicted head equals the gold head and the deprel matches
// after subtype stripping (exact_deprel disables the stripping).
LasResult las(const Treebank& gold, const Treebank& pred, bool exact_deprel = false);

// LAS over words of sentences whose gold length is in [lo, hi];
// nullopt when the range selects no sentences.
std::optional<LasResult> las_for_lengths(const Treebank& gold, const Treebank& pred,
                                         int lo, int hi, bool exact_deprel = false);

} // namespace isoscope
