#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isoscope {

constexpr int kConlluColumns = 10;

// Column indices of the CoNLL-U format:
// ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC
enum ConlluColumn {
    kColId = 0,
    kColForm = 1,
    kColLemma = 2,
    kColUpos = 3,
    kColXpos = 4,
    kColFeats = 5,
    kColHead = 6,
    kColDeprel = 7,
    kColDeps = 8,
    kColMisc = 9,
};

enum class RowKind {
    Word,      // plain syntactic word, integer ID
    MwtRange,  // multiword-token range line, ID like "3-4"
    EmptyNode, // enhanced-dependency empty node, ID like "3.1"
};

// One CoNLL-U row. The raw columns are kept verbatim so a treebank
// round-trips byte-identically; `id` and `head` are the parsed values
// used for analysis (head == -1 when the HEAD column is "_").
struct Token {
    RowKind kind = RowKind::Word;
    int id = 0;
    int head = -1;
    std::array<std::string, kConlluColumns> columns{};

    bool is_word() const { return kind == RowKind::Word; }
    bool is_mwt_range() const { return kind == RowKind::MwtRange; }
    bool is_empty_node() const { return kind == RowKind::EmptyNode; }

    const std::string& id_text() const { return columns[kColId]; }
    const std::string& form() const { return columns[kColForm]; }
    const std::string& upos() const { return columns[kColUpos]; }
    const std::string& deprel() const { return columns[kColDeprel]; }
};

struct Sentence {
    std::vector<Token> tokens;
    std::string sent_id;                // empty when no "# sent_id =" comment
    std::vector<std::string> comments;  // verbatim, including leading '#'
};

struct Treebank {
    std::vector<Sentence> sentences;
    std::string name;

    std::size_t size() const { return sentences.size(); }
    bool empty() const { return sentences.empty(); }
};

// Parses CoNLL-U text. CRLF line endings are normalized to LF and a
// UTF-8 BOM is dropped. Throws ParseError with a line number on
// malformed column counts, bad IDs, non-contiguous word IDs, or heads
// outside 0..n.
Treebank parse_conllu(std::string_view text, std::string_view name = "");

// Reads and parses a file; the treebank name defaults to the file stem.
Treebank read_conllu_file(const std::filesystem::path& path);

// Inverse of parse_conllu on well-formed input (modulo trailing-newline
// normalization). Every sentence is terminated by a blank line.
std::string write_conllu(const Treebank& tb);

void write_conllu_file(const Treebank& tb, const std::filesystem::path& path);

// Number of syntactic words (MWT ranges and empty nodes excluded).
int sentence_length(const Sentence& s);

// Arithmetic mean of sentence_length over all sentences.
// Throws EmptySubsetError on an empty treebank.
double mean_test_length(const Treebank& tb);

// Copy of the treebank keeping only sentences whose length is in [lo, hi].
Treebank filter_by_length(const Treebank& tb, int lo, int hi);

// Sensitivity-analysis variant of a treebank with UPOS=PUNCT words
// removed. Dependents of a removed word are reattached to its nearest
// retained ancestor, ids and heads are renumbered, and MWT/empty rows
// are dropped. The result is for analysis, not byte-level round-trips.
Treebank exclude_punct(const Treebank& tb);

// Label used in error messages: sent_id when present.
std::string sentence_label(const Sentence& s);

} // namespace isoscope
