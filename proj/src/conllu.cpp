#include "isoscope/conllu.hpp"
#include "isoscope/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace isoscope {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

ParseError parse_error(std::string_view name, int line, const std::string& what) {
    std::ostringstream os;
    if (!name.empty()) os << name << ": ";
    os << "line " << line << ": " << what;
    return ParseError(os.str());
}

// ID column syntax decides the row kind.
RowKind classify_id(std::string_view id, int& value, std::string_view name, int line) {
    int v = 0;
    if (parse_int(id, v)) {
        value = v;
        return RowKind::Word;
    }
    auto dash = id.find('-');
    if (dash != std::string_view::npos) {
        int a = 0, b = 0;
        if (!parse_int(id.substr(0, dash), a) || !parse_int(id.substr(dash + 1), b) || a > b)
            throw parse_error(name, line, "malformed token ID '" + std::string(id) + "'");
        value = a;
        return RowKind::MwtRange;
    }
    auto dot = id.find('.');
    if (dot != std::string_view::npos) {
        int a = 0, b = 0;
        if (!parse_int(id.substr(0, dot), a) || !parse_int(id.substr(dot + 1), b))
            throw parse_error(name, line, "malformed token ID '" + std::string(id) + "'");
        value = a;
        return RowKind::EmptyNode;
    }
    throw parse_error(name, line, "malformed token ID '" + std::string(id) + "'");
}

struct PendingSentence {
    Sentence sentence;
    std::vector<int> token_lines;
    int first_line = 0;

    bool has_content() const {
        return !sentence.tokens.empty() || !sentence.comments.empty();
    }
};

void finalize_sentence(Treebank& tb, PendingSentence& pend, std::string_view name) {
    Sentence& s = pend.sentence;
    if (s.tokens.empty())
        throw parse_error(name, pend.first_line, "sentence has no token lines");

    int n_words = 0;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (!t.is_word()) continue;
        ++n_words;
        if (t.id != n_words) {
            std::ostringstream os;
            os << "non-contiguous ids (expected " << n_words << ", got " << t.id << ")";
            throw parse_error(name, pend.token_lines[i], os.str());
        }
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (!t.is_word()) continue;
        if (t.head < 0 || t.head > n_words) {
            std::ostringstream os;
            os << "head " << t.columns[kColHead] << " out of range (sentence has "
               << n_words << " words)";
            throw parse_error(name, pend.token_lines[i], os.str());
        }
    }
    // MWT ranges must cover existing word ids.
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (t.is_mwt_range() && (t.id < 1 || t.id > n_words))
            throw parse_error(name, pend.token_lines[i],
                              "MWT range '" + t.id_text() + "' outside word ids");
    }

    tb.sentences.push_back(std::move(pend.sentence));
    pend = PendingSentence{};
}

} // namespace

Treebank parse_conllu(std::string_view text, std::string_view name) {
    Treebank tb;
    tb.name = std::string(name);

    // Strip a UTF-8 BOM if present.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    PendingSentence pend;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size() && line_no > 0) break;
        auto eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line.empty()) {
            if (pend.has_content()) finalize_sentence(tb, pend, name);
            continue;
        }
        if (line[0] == '#') {
            if (!pend.sentence.tokens.empty())
                throw parse_error(name, line_no, "comment line after token lines");
            if (!pend.has_content()) pend.first_line = line_no;
            std::string comment(line);
            pend.sentence.comments.push_back(comment);
            for (std::string_view prefix : {"# sent_id = ", "# sent_id ="}) {
                if (line.size() > prefix.size() && line.substr(0, prefix.size()) == prefix) {
                    pend.sentence.sent_id = std::string(line.substr(prefix.size()));
                    break;
                }
            }
            continue;
        }

        Token tok;
        std::size_t col = 0, start = 0;
        std::string_view rest = line;
        while (true) {
            auto tab = rest.find('\t', start);
            std::string_view field =
                (tab == std::string_view::npos) ? rest.substr(start) : rest.substr(start, tab - start);
            if (col < kConlluColumns) tok.columns[col] = std::string(field);
            ++col;
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        if (col != kConlluColumns) {
            std::ostringstream os;
            os << "expected " << kConlluColumns << " tab-separated columns, got " << col;
            throw parse_error(name, line_no, os.str());
        }

        tok.kind = classify_id(tok.columns[kColId], tok.id, name, line_no);
        const std::string& head_col = tok.columns[kColHead];
        if (tok.is_word()) {
            if (tok.id < 1)
                throw parse_error(name, line_no, "word id must be >= 1");
            if (!parse_int(head_col, tok.head))
                throw parse_error(name, line_no, "word has non-numeric HEAD '" + head_col + "'");
            if (tok.head == tok.id)
                throw parse_error(name, line_no, "token is its own head");
        } else {
            int h = 0;
            tok.head = parse_int(head_col, h) ? h : -1; // "_" and friends
        }

        if (!pend.has_content()) pend.first_line = line_no;
        pend.token_lines.push_back(line_no);
        pend.sentence.tokens.push_back(std::move(tok));
    }
    if (pend.has_content()) finalize_sentence(tb, pend, name);
    return tb;
}

Treebank read_conllu_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_conllu(buf.str(), path.stem().string());
}

std::string write_conllu(const Treebank& tb) {
    std::string out;
    for (const Sentence& s : tb.sentences) {
        for (const std::string& c : s.comments) {
            out += c;
            out += '\n';
        }
        for (const Token& t : s.tokens) {
            for (int c = 0; c < kConlluColumns; ++c) {
                if (c > 0) out += '\t';
                out += t.columns[c];
            }
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

void write_conllu_file(const Treebank& tb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << write_conllu(tb);
}

int sentence_length(const Sentence& s) {
    int n = 0;
    for (const Token& t : s.tokens)
        if (t.is_word()) ++n;
    return n;
}

double mean_test_length(const Treebank& tb) {
    if (tb.empty()) throw EmptySubsetError("mean sentence length of an empty treebank");
    long long total = 0;
    for (const Sentence& s : tb.sentences) total += sentence_length(s);
    return static_cast<double>(total) / static_cast<double>(tb.size());
}

Treebank filter_by_length(const Treebank& tb, int lo, int hi) {
    Treebank out;
    out.name = tb.name;
    for (const Sentence& s : tb.sentences) {
        int len = sentence_length(s);
        if (len >= lo && len <= hi) out.sentences.push_back(s);
    }
    return out;
}

Treebank exclude_punct(const Treebank& tb) {
    Treebank out;
    out.name = tb.name;
    for (const Sentence& s : tb.sentences) {
        // old word id -> token, and old id -> new id (0 = dropped)
        std::vector<const Token*> words;
        for (const Token& t : s.tokens)
            if (t.is_word()) words.push_back(&t);
        int n = static_cast<int>(words.size());

        std::vector<int> new_id(n + 1, 0);
        int next = 0;
        for (int i = 1; i <= n; ++i)
            if (words[i - 1]->upos() != "PUNCT") new_id[i] = ++next;

        Sentence ns;
        ns.sent_id = s.sent_id;
        ns.comments = s.comments;
        for (int i = 1; i <= n; ++i) {
            if (new_id[i] == 0) continue;
            Token t = *words[i - 1];
            // climb over removed ancestors
            int head = t.head;
            int steps = 0;
            while (head != 0 && new_id[head] == 0) {
                head = words[head - 1]->head;
                if (++steps > n)
                    throw TreeError("sentence '" + sentence_label(s) +
                                    "': head cycle while removing punctuation");
            }
            t.id = new_id[i];
            t.head = head == 0 ? 0 : new_id[head];
            t.columns[kColId] = std::to_string(t.id);
            t.columns[kColHead] = std::to_string(t.head);
            ns.tokens.push_back(std::move(t));
        }
        if (!ns.tokens.empty()) out.sentences.push_back(std::move(ns));
    }
    return out;
}

std::string sentence_label(const Sentence& s) {
    return s.sent_id.empty() ? std::string("<unnamed>") : s.sent_id;
}

} // namespace isoscope
