#include "isoscope/las.hpp"
#include "isoscope/errors.hpp"

#include <sstream>

namespace isoscope {

namespace {

std::vector<const Token*> words_of(const Sentence& s) {
    std::vector<const Token*> out;
    for (const Token& t : s.tokens)
        if (t.is_word()) out.push_back(&t);
    return out;
}

// Scores one aligned sentence pair into (correct, total).
void score_sentence(const Sentence& g, const Sentence& p, std::size_t index,
                    bool exact_deprel, long long& correct, long long& total) {
    auto gw = words_of(g);
    auto pw = words_of(p);
    if (gw.size() != pw.size()) {
        std::ostringstream os;
        os << "sentence " << index + 1 << ": word count mismatch (gold " << gw.size()
           << ", predicted " << pw.size() << ")";
        throw AlignmentError(os.str());
    }
    for (std::size_t i = 0; i < gw.size(); ++i) {
        ++total;
        if (gw[i]->head != pw[i]->head) continue;
        if (exact_deprel ? gw[i]->deprel() == pw[i]->deprel()
                         : strip_subtype(gw[i]->deprel()) == strip_subtype(pw[i]->deprel()))
            ++correct;
    }
}

LasResult finish(long long correct, long long total) {
    if (total == 0) throw EmptySubsetError("las: no syntactic words to evaluate");
    return LasResult{correct, total,
                     static_cast<double>(correct) / static_cast<double>(total)};
}

} // namespace

std::string strip_subtype(const std::string& deprel) {
    auto colon = deprel.find(':');
    return colon == std::string::npos ? deprel : deprel.substr(0, colon);
}

LasResult las(const Treebank& gold, const Treebank& pred, bool exact_deprel) {
    if (gold.size() != pred.size()) {
        std::ostringstream os;
        os << "sentence count mismatch (gold " << gold.size() << ", predicted "
           << pred.size() << ")";
        throw AlignmentError(os.str());
    }
    long long correct = 0, total = 0;
    for (std::size_t i = 0; i < gold.size(); ++i)
        score_sentence(gold.sentences[i], pred.sentences[i], i, exact_deprel, correct, total);
    return finish(correct, total);
}

std::optional<LasResult> las_for_lengths(const Treebank& gold, const Treebank& pred,
                                         int lo, int hi, bool exact_deprel) {
    if (gold.size() != pred.size()) {
        std::ostringstream os;
        os << "sentence count mismatch (gold " << gold.size() << ", predicted "
           << pred.size() << ")";
        throw AlignmentError(os.str());
    }
    long long correct = 0, total = 0;
    bool any = false;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        int len = sentence_length(gold.sentences[i]);
        if (len < lo || len > hi) continue;
        any = true;
        score_sentence(gold.sentences[i], pred.sentences[i], i, exact_deprel, correct, total);
    }
    if (!any) return std::nullopt;
    return finish(correct, total);
}

} // namespace isoscope
