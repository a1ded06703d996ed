#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "isoscope/conllu.hpp"
#include "isoscope/las.hpp"
#include "isoscope/records.hpp"
#include "isoscope/stats.hpp"
#include "isoscope/tree_canon.hpp"

namespace isoscope {

// One correlation table row: spearman (or partial spearman, when
// controls are named) of x against y.
struct CorrelationRow {
    std::string x;
    std::string y;
    std::vector<std::string> controls;
    CorrelationResult result;
};

// One cross-validation table cell.
struct CvCell {
    std::string features; // feature names joined with '+'
    double value = 0.0;
};

enum class CvMode { Original, MultiSeed };

// Per-sentence-length analysis row; ratios are absent when the test
// side of the bin is empty.
struct BinRecord {
    std::string name;
    int length = 0;
    std::optional<double> dug_l;
    std::optional<double> las_l;
    long long n_train_l = 0;
    long long n_test_l = 0;
};

// Fixed-covariant split sample: one training set and as many disjoint
// test sets as the pool allowed.
struct ControlledSplit {
    std::string source_name;
    Treebank train;
    std::vector<Treebank> tests;
    std::uint64_t seed = 0;
};

// DUG/UUG ratio with the counts behind it.
struct DugReport {
    double value = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_train_shapes = 0;
};

struct BackgroundResult {
    Series normalized_las;     // las / fit(las ~ size)
    Series doubly_normalized;  // above / fit(above ~ mean_test_len)
    std::vector<CorrelationRow> report;
};

// Trees of all sentences; TreeErrors gain treebank/sentence context.
std::vector<DepTree> treebank_trees(const Treebank& tb);

// Full analysis row for one treebank triple: DUG/UUG of the test
// against the training shapes, LAS of the predictions, size and mean
// test length covariants.
TreebankRecord summarize_treebank(const Treebank& train, const Treebank& test_gold,
                                  const Treebank& test_pred, bool exact_deprel = false);

// Isomorphism ratio between two treebanks, optionally restricted to
// sentence lengths in [lo, hi] on both sides.
DugReport dug_report(const Treebank& train, const Treebank& test, IsoMode mode,
                     std::optional<std::pair<int, int>> lengths = {});

// Spearman rows of {train_size, dug, mean_test_len} against las and of
// {train_size, mean_test_len} against dug. Needs >= 5 records.
std::vector<CorrelationRow> correlation_table(const std::vector<TreebankRecord>& records,
                                              PValueMethod method = PValueMethod::TApprox);

// Spearman rows of {las, train_size, mean_test_len} against any record
// feature (used for the focused-DUG table).
std::vector<CorrelationRow> correlation_block(const std::vector<TreebankRecord>& records,
                                              const std::string& x,
                                              const std::vector<std::string>& targets,
                                              PValueMethod method = PValueMethod::TApprox);

// The four standard feature sets {size}, {size,dug}, {size,Ltest},
// {size,dug,Ltest} over the chosen size and dug feature names.
std::vector<std::vector<std::string>> standard_feature_sets(const std::string& size_feature,
                                                            const std::string& dug_feature);

// Mean k-fold explained variance of las per feature set. Original mode
// uses unshuffled contiguous folds; MultiSeed shuffles and averages
// over the given seeds. Needs >= 2k records.
std::vector<CvCell> cv_table(const std::vector<TreebankRecord>& records,
                             const std::vector<std::vector<std::string>>& feature_sets,
                             CvMode mode, int k = 3,
                             const std::vector<std::uint64_t>& seeds = {0, 1, 2, 3, 4, 5, 6,
                                                                        7, 8, 9});

// Per length l in [lo, hi]: training shapes and test ratio restricted
// to sentences of exactly that length, plus the corresponding LAS.
std::vector<BinRecord> length_binned_analysis(const Treebank& train, const Treebank& test_gold,
                                              const Treebank& test_pred, int lo = 3,
                                              int hi = 30, bool exact_deprel = false);

// DUG after filtering BOTH treebanks to lengths in [lo, hi].
double focused_dug(const Treebank& train, const Treebank& test, int lo = 9, int hi = 14);

// Divides las by an OLS fit against (log) size, then by a fit against
// mean test length, and reports spearman of dug/Ltest against the
// normalized series. Needs >= 10 records and positive predictions.
BackgroundResult background_subtract(const std::vector<TreebankRecord>& records,
                                     bool use_log_size = true,
                                     PValueMethod method = PValueMethod::TApprox);

// Plain spearman(x, y) plus partial rows controlling {log_size},
// {mean_test_len}, and both. Needs >= 8 records.
std::vector<CorrelationRow> partial_corr_table(const std::vector<TreebankRecord>& records,
                                               const std::string& x = "dug",
                                               const std::string& y = "las",
                                               PValueMethod method = PValueMethod::TApprox);

// Samples a controlled split from the pool: keep sentences of exactly
// the given length, shuffle with a seeded generator, take train_n for
// training, then as many disjoint test_n-sized test sets as remain;
// the leftover is discarded.
ControlledSplit sample_controlled_splits(const Treebank& pool, int length = 12,
                                         int train_n = 1000, int test_n = 200,
                                         int min_pool = 1200, std::uint64_t seed = 0);

} // namespace isoscope
