#include "seuvote/specfmt.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace seuvote {

std::string ParseError::message() const {
    return std::to_string(where.line) + ":" + std::to_string(where.column) + ": expected " + expected + ", found " + found;
}

namespace {

constexpr int kMaxVoters = 1000;

enum class Tok { Word, Punct, Newline, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLocation at;
};

bool word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '\'' || c == '-' || c == '.' || c >= 0x80;
}

bool punct_byte(char c) {
    return std::string_view(":={}()[],;|").find(c) != std::string_view::npos;
}

// Newlines are only significant where the next content line starts in
// column 1; indented lines continue the current statement.
std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    bool line_start = true;
    SourceLocation content_end;  // just past the last token, where a statement ends
    auto end_statement = [&] {
        if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "end of line", content_end});
    };
    while (i < src.size()) {
        const char c = src[i];
        if (line_start) {
            // look at the first content byte of this line
            std::size_t j = i;
            while (j < src.size() && (src[j] == ' ' || src[j] == '\t' || src[j] == '\r')) ++j;
            const bool blank = j == src.size() || src[j] == '\n' || src[j] == '#';
            if (!blank && j == i) end_statement();
            line_start = false;
            continue;
        }
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            line_start = true;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i, ++col;
            continue;
        }
        const SourceLocation at{line, col};
        if (word_byte(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && word_byte(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Word, std::string(src.substr(i, j - i)), at});
            col += static_cast<int>(j - i);
            i = j;
            content_end = {line, col};
            continue;
        }
        if (punct_byte(c)) {
            out.push_back({Tok::Punct, std::string(1, c), at});
        } else {
            std::ostringstream shown;
            shown << "byte 0x" << std::hex << static_cast<int>(static_cast<unsigned char>(c));
            out.push_back({Tok::Bad, shown.str(), at});
        }
        ++i;
        ++col;
        content_end = {line, col};
    }
    end_statement();
    out.push_back({Tok::End, "end of input", {line, col}});
    return out;
}

struct Failure {
    ParseError error;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    std::vector<ParseError> errors;

    // ---- token helpers
    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }
    bool at_newline() const { return peek().kind == Tok::Newline; }
    bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }
    bool at_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }

    const Token& advance() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const { fail_at(peek(), expected); }
    [[noreturn]] static void fail_at(const Token& t, const std::string& expected) {
        const std::string found = t.kind == Tok::Word || t.kind == Tok::Punct ? "'" + t.text + "'" : t.text;
        throw Failure{{t.at, expected, found}};
    }

    void punct(char c) {
        if (!at_punct(c)) fail(std::string("'") + c + "'");
        advance();
    }
    const Token& word(const std::string& what) {
        if (peek().kind != Tok::Word) fail(what);
        return advance();
    }
    void keyword(std::string_view w) {
        if (!at_word(w)) fail("'" + std::string(w) + "'");
        advance();
    }
    void end_of_statement() {
        if (!at_newline() && !at_end()) fail("end of line");
        advance();
    }
    int integer(const std::string& what) {
        const Token& t = word(what);
        int v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size() || t.text.size() > 9) fail_at(t, what);
        return v;
    }

    // Skips the rest of a broken statement.
    void recover() {
        while (!at_newline() && !at_end()) advance();
        advance();
    }

    template <class Fn>
    void statement(Fn&& fn) {
        try {
            fn();
        } catch (const Failure& f) {
            errors.push_back(f.error);
            recover();
        }
    }

    // ---- value helpers
    StateId state(const StateSpace& states) {
        const Token& t = word("state label");
        const int s = states.find(t.text);
        if (s < 0) fail_at(t, "known state label");
        return s;
    }
    OutcomeId outcome(const OutcomeSpace& outcomes) {
        const Token& t = word("outcome label");
        const int x = outcomes.find(t.text);
        if (x < 0) fail_at(t, "known outcome label");
        return x;
    }
    Event event(const StateSpace& states) {
        punct('{');
        Event e;
        if (!at_punct('}')) {
            e.insert(state(states));
            while (at_punct(',')) {
                advance();
                e.insert(state(states));
            }
        }
        punct('}');
        return e;
    }
    std::vector<std::string> labels(const std::string& what) {
        std::vector<std::string> out;
        out.push_back(word(what).text);
        while (peek().kind == Tok::Word) out.push_back(advance().text);
        if (!at_newline() && !at_end()) fail(what + " or end of line");
        return out;
    }

    // `level k: pairs=.. Ga=.. Gb=.. [quotas=..]` repeated from klo to khi.
    void levels(const StateSpace& states, int klo, int khi, bool with_quotas, FilterSeq& seq,
                std::vector<std::vector<Quota>>* quotas) {
        if (klo > khi) fail("klo <= khi");
        if (khi - klo > 4096) fail("fewer levels");
        seq.klo = klo;
        seq.khi = khi;
        for (int k = klo; k <= khi; ++k) {
            if (!at_word("level")) fail("'level " + std::to_string(k) + ":'");
            advance();
            const Token& num = peek();
            if (integer("level number") != k) fail_at(num, "level " + std::to_string(k));
            punct(':');
            Dipartition d;
            keyword("pairs");
            punct('=');
            if (at_word("none")) {
                advance();
            } else {
                do {
                    if (!d.pairs.empty()) advance();
                    punct('(');
                    EventPair p;
                    p.e = event(states);
                    punct(',');
                    p.f = event(states);
                    punct(')');
                    d.pairs.push_back(p);
                } while (at_punct(';'));
            }
            keyword("Ga");
            punct('=');
            d.ga = event(states);
            keyword("Gb");
            punct('=');
            d.gb = event(states);
            if (with_quotas) {
                keyword("quotas");
                const Token& q_at = peek();
                punct('=');
                std::vector<Quota> qs;
                if (at_word("none")) {
                    advance();
                } else {
                    do {
                        if (!qs.empty()) advance();
                        punct('(');
                        Quota q;
                        keyword("ttilde");
                        punct('=');
                        q.ttilde = integer("integer");
                        punct(',');
                        keyword("that");
                        punct('=');
                        q.that = integer("integer");
                        punct(')');
                        qs.push_back(q);
                    } while (at_punct(';'));
                }
                if (qs.size() != d.pairs.size())
                    fail_at(q_at, std::to_string(d.pairs.size()) + " quota entries (one per pair)");
                quotas->push_back(std::move(qs));
            }
            seq.levels.push_back(std::move(d));
        }
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// key=value arguments of a factor line; the value parser is picked per key
class Args {
public:
    explicit Args(Parser& p) : p_(p) {}

    template <class Fn>
    void loop(const std::set<std::string>& allowed, Fn&& value) {
        while (p_.peek().kind == Tok::Word && !p_.at_word("level")) {
            const Token& key = p_.peek();
            if (!allowed.count(key.text)) p_.fail(expected_keys(allowed));
            if (!seen_.insert(key.text).second) p_.fail("a key not given yet");
            p_.advance();
            p_.punct('=');
            value(key.text);
        }
    }
    void require(const std::set<std::string>& keys) const {
        for (const auto& k : keys)
            if (!seen_.count(k)) p_.fail("'" + k + "='");
    }

private:
    static std::string expected_keys(const std::set<std::string>& allowed) {
        std::string s = "one of";
        for (const auto& k : allowed) s += " " + k + "=";
        return s;
    }
    Parser& p_;
    std::set<std::string> seen_;
};

FactorSpec parse_factor(Parser& p, const Mechanism& m) {
    const Token& kind = p.word("factor kind");
    Args args(p);
    auto two = [&](OutcomeId& a, OutcomeId& b, const std::string& key) {
        if (key == "a") a = p.outcome(m.outcomes);
        else if (key == "b") b = p.outcome(m.outcomes);
        else return false;
        return true;
    };
    if (kind.text == "constant") {
        ConstantFactor f;
        args.loop({"c"}, [&](const std::string&) { f.c = p.outcome(m.outcomes); });
        args.require({"c"});
        return f;
    }
    if (kind.text == "simple") {
        SimpleFactor f;
        args.loop({"a", "b", "kbar"}, [&](const std::string& k) {
            if (!two(f.a, f.b, k)) f.kbar = p.integer("integer");
        });
        args.require({"a", "b", "kbar"});
        return f;
    }
    if (kind.text == "quasidict") {
        QuasiDictatorialFactor f;
        args.loop({"a", "b", "menu"}, [&](const std::string& k) {
            if (two(f.a, f.b, k)) return;
            f.menu.push_back(p.event(m.states));
            while (p.at_punct('|')) {
                p.advance();
                f.menu.push_back(p.event(m.states));
            }
        });
        args.require({"a", "b", "menu"});
        return f;
    }
    if (kind.text == "dyadic") {
        DyadicFactor f;
        args.loop({"a", "b", "E", "F", "klo", "khi", "H"}, [&](const std::string& k) {
            if (two(f.a, f.b, k)) return;
            if (k == "E") f.e = p.event(m.states);
            else if (k == "F") f.f = p.event(m.states);
            else if (k == "klo") f.klo = p.integer("integer");
            else if (k == "khi") f.khi = p.integer("integer");
            else if (p.at_word("threshold")) {
                p.advance();
                p.punct('(');
                f.h = HTable::threshold(p.integer("integer"));
                p.punct(')');
            } else if (p.at_word("table")) {
                p.advance();
                p.punct('[');
                std::vector<std::vector<int>> grid(1);
                while (!p.at_punct(']')) {
                    if (p.at_punct(';')) {
                        if (grid.back().empty()) p.fail("0 or 1");
                        p.advance();
                        grid.emplace_back();
                        continue;
                    }
                    const Token& cell = p.peek();
                    const int v = p.integer("0 or 1");
                    if (v != 0 && v != 1) Parser::fail_at(cell, "0 or 1");
                    grid.back().push_back(v);
                    if (grid.size() * grid.back().size() > 1'000'000) Parser::fail_at(cell, "a smaller table");
                }
                if (grid.back().empty()) p.fail("0 or 1");
                p.advance();
                f.h = HTable::table(std::move(grid));
            } else {
                p.fail("threshold(s) or table[...]");
            }
        });
        args.require({"a", "b", "E", "F", "klo", "khi", "H"});
        return f;
    }
    if (kind.text == "filtering") {
        FilteringFactor f;
        int klo = 0, khi = 0;
        args.loop({"a", "b", "klo", "khi"}, [&](const std::string& k) {
            if (two(f.a, f.b, k)) return;
            (k == "klo" ? klo : khi) = p.integer("integer");
        });
        args.require({"a", "b", "klo", "khi"});
        p.levels(m.states, klo, khi, true, f.filter, &f.quotas);
        return f;
    }
    Parser::fail_at(kind, "constant, simple, quasidict, dyadic or filtering");
}

void keyword_int(Parser& p, std::string_view key, int& out) {
    p.keyword(key);
    p.punct('=');
    out = p.integer("integer");
}

}  // namespace

ParseResult parse_spec(std::string_view text) {
    Parser p(text);
    Mechanism m;
    std::optional<std::vector<std::string>> states, outcomes;
    std::map<std::string, std::pair<SourceLocation, std::vector<OutcomeId>>> feasible;
    std::vector<std::pair<std::string, SourceLocation>> feasible_raw;
    std::optional<int> voters;
    bool header_done = false;
    bool header_ok = true;
    struct PendingCell {
        std::string name;
        Event states;
        SourceLocation at;
    };
    std::vector<PendingCell> cells;
    std::map<std::string, std::pair<FactorSpec, SourceLocation>> factors;

    auto close_header = [&] {
        if (header_done) return;
        header_done = true;
        std::string missing;
        if (!states) missing = "'states:' line";
        else if (!outcomes) missing = "'outcomes:' line";
        else if (!voters) missing = "'voters:' line";
        if (!missing.empty()) {
            header_ok = false;
            Parser::fail_at(p.peek(), missing);
        }
        std::vector<std::vector<OutcomeId>> sets(states->size());
        for (std::size_t s = 0; s < sets.size(); ++s) {
            auto it = feasible.find((*states)[s]);
            if (it == feasible.end())
                for (OutcomeId x = 0; x < static_cast<int>(outcomes->size()); ++x) sets[s].push_back(x);
            else
                sets[s] = it->second.second;
        }
        m.feasibility = FeasibilityMap(std::move(sets));
        m.n = *voters;
    };
    auto need_spaces = [&](const Token& at, bool need_outcomes) {
        if (!states) Parser::fail_at(at, "'states:' line first");
        if (need_outcomes && !outcomes) Parser::fail_at(at, "'outcomes:' line first");
    };

    while (!p.at_end()) {
        p.statement([&] {
            if (p.at_newline()) {
                p.advance();
                return;
            }
            const Token& head = p.peek();
            if (head.kind != Tok::Word) p.fail("'states:', 'outcomes:', 'feasible', 'voters:', 'cell' or 'factor'");
            if (head.text == "cell" || head.text == "factor") {
                if (!header_done) {
                    close_header();
                }
                if (!header_ok) {
                    p.recover();
                    return;
                }
            } else if (header_done && (head.text == "states" || head.text == "outcomes" || head.text == "feasible" || head.text == "voters")) {
                p.fail("'cell' or 'factor' (header lines come first)");
            }
            if (head.text == "states" || head.text == "outcomes") {
                auto& slot = head.text == "states" ? states : outcomes;
                if (slot) p.fail("a single '" + head.text + ":' line");
                p.advance();
                p.punct(':');
                const Token& first = p.peek();
                auto ls = p.labels(head.text == "states" ? "state label" : "outcome label");
                std::set<std::string> uniq(ls.begin(), ls.end());
                if (uniq.size() != ls.size()) Parser::fail_at(first, "distinct labels");
                if (head.text == "states" && ls.size() > static_cast<std::size_t>(kMaxStates)) Parser::fail_at(first, "at most 32 states");
                p.end_of_statement();
                slot = std::move(ls);
                if (head.text == "states") m.states = StateSpace(*states);
                else m.outcomes = OutcomeSpace(*outcomes);
            } else if (head.text == "feasible") {
                need_spaces(head, true);
                p.advance();
                const Token& st = p.peek();
                const StateId s = p.state(m.states);
                if (feasible.count(m.states.label(s))) Parser::fail_at(st, "one 'feasible' line per state");
                p.punct(':');
                std::vector<OutcomeId> xs{p.outcome(m.outcomes)};
                while (p.peek().kind == Tok::Word) xs.push_back(p.outcome(m.outcomes));
                p.end_of_statement();
                std::sort(xs.begin(), xs.end());
                xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
                feasible[m.states.label(s)] = {st.at, std::move(xs)};
            } else if (head.text == "voters") {
                if (voters) p.fail("a single 'voters:' line");
                p.advance();
                p.punct(':');
                const Token& num = p.peek();
                const int n = p.integer("voter count");
                if (n < 1 || n > kMaxVoters) Parser::fail_at(num, "voter count between 1 and " + std::to_string(kMaxVoters));
                p.end_of_statement();
                voters = n;
            } else if (head.text == "cell") {
                p.advance();
                const Token& name = p.word("cell name");
                for (const auto& c : cells)
                    if (c.name == name.text) Parser::fail_at(name, "a new cell name (duplicate cell)");
                p.punct(':');
                Event e{p.state(m.states)};
                while (p.peek().kind == Tok::Word) e.insert(p.state(m.states));
                p.end_of_statement();
                cells.push_back({name.text, e, name.at});
            } else if (head.text == "factor") {
                p.advance();
                const Token& name = p.word("cell name");
                bool known = false;
                for (const auto& c : cells) known = known || c.name == name.text;
                if (!known) Parser::fail_at(name, "name of a declared cell");
                if (factors.count(name.text)) Parser::fail_at(name, "one factor per cell (duplicate factor)");
                p.punct(':');
                FactorSpec f = parse_factor(p, m);
                p.end_of_statement();
                factors.emplace(name.text, std::make_pair(std::move(f), name.at));
            } else {
                p.fail("'states:', 'outcomes:', 'feasible', 'voters:', 'cell' or 'factor'");
            }
        });
    }
    if (!header_done) {
        try {
            close_header();
        } catch (const Failure& f) {
            p.errors.push_back(f.error);
        }
    }
    ParseResult r;
    if (header_ok) {
        if (cells.empty()) p.errors.push_back({p.peek().at, "at least one 'cell' line", "end of input"});
        for (const auto& c : cells)
            if (!factors.count(c.name)) p.errors.push_back({c.at, "a 'factor " + c.name + ":' line", "end of input"});
    }
    r.errors = std::move(p.errors);
    if (!r.errors.empty()) return r;
    SpecDocument doc;
    for (const auto& c : cells) {
        auto& [f, at] = factors.at(c.name);
        m.cells.push_back({c.name, c.states, f});
        doc.cell_locations[c.name] = c.at;
        doc.factor_locations[c.name] = at;
    }
    doc.mechanism = std::move(m);
    r.document = std::move(doc);
    return r;
}

FilterParseResult parse_filters(std::string_view text) {
    Parser p(text);
    std::optional<StateSpace> states;
    FilterDocument doc;
    std::set<std::string> names;
    while (!p.at_end()) {
        p.statement([&] {
            if (p.at_newline()) {
                p.advance();
                return;
            }
            if (p.at_word("states")) {
                if (states) p.fail("a single 'states:' line");
                p.advance();
                p.punct(':');
                const Token& first = p.peek();
                auto ls = p.labels("state label");
                std::set<std::string> uniq(ls.begin(), ls.end());
                if (uniq.size() != ls.size()) Parser::fail_at(first, "distinct labels");
                if (ls.size() > static_cast<std::size_t>(kMaxStates)) Parser::fail_at(first, "at most 32 states");
                p.end_of_statement();
                states = StateSpace(std::move(ls));
            } else if (p.at_word("filter")) {
                if (!states) p.fail("'states:' line first");
                p.advance();
                const Token& name = p.word("filter name");
                if (!names.insert(name.text).second) Parser::fail_at(name, "a new filter name");
                p.punct(':');
                int klo = 0, khi = 0;
                keyword_int(p, "klo", klo);
                keyword_int(p, "khi", khi);
                NamedFilter nf{name.text, {}, name.at};
                p.levels(*states, klo, khi, false, nf.filter, nullptr);
                p.end_of_statement();
                doc.filters.push_back(std::move(nf));
            } else {
                p.fail("'states:' or 'filter'");
            }
        });
    }
    FilterParseResult r;
    if (!states && p.errors.empty()) p.errors.push_back({p.peek().at, "'states:' line", "end of input"});
    r.errors = std::move(p.errors);
    if (!r.errors.empty()) return r;
    doc.states = std::move(*states);
    r.document = std::move(doc);
    return r;
}

namespace {

std::string render(const StateSpace& states, Event e) {
    std::string s = "{";
    bool first = true;
    e.for_each([&](StateId x) {
        if (!first) s += ",";
        s += states.label(x);
        first = false;
    });
    return s + "}";
}

void render_levels(std::ostringstream& out, const StateSpace& states, const FilterSeq& seq, const std::vector<std::vector<Quota>>* quotas) {
    for (int k = seq.klo; k <= seq.khi; ++k) {
        const Dipartition& d = seq.at(k);
        out << "\n  level " << k << ": pairs=";
        if (d.pairs.empty()) out << "none";
        for (std::size_t m = 0; m < d.pairs.size(); ++m)
            out << (m ? ";" : "") << "(" << render(states, d.pairs[m].e) << "," << render(states, d.pairs[m].f) << ")";
        out << " Ga=" << render(states, d.ga) << " Gb=" << render(states, d.gb);
        if (quotas) {
            const auto& qs = quotas->at(static_cast<std::size_t>(k - seq.klo));
            out << " quotas=";
            if (qs.empty()) out << "none";
            for (std::size_t m = 0; m < qs.size(); ++m) out << (m ? ";" : "") << "(ttilde=" << qs[m].ttilde << ",that=" << qs[m].that << ")";
        }
    }
}

}  // namespace

std::string serialize(const Mechanism& mech) {
    std::ostringstream out;
    auto line = [&](const char* head, const auto& labels) {
        out << head << ":";
        for (const auto& l : labels) out << " " << l;
        out << "\n";
    };
    line("states", mech.states.labels());
    line("outcomes", mech.outcomes.labels());
    for (StateId s = 0; s < mech.states.size(); ++s) {
        out << "feasible " << mech.states.label(s) << ":";
        for (OutcomeId x : mech.feasibility.available(s)) out << " " << mech.outcomes.label(x);
        out << "\n";
    }
    out << "voters: " << mech.n << "\n";
    for (const auto& c : mech.cells) {
        out << "cell " << c.name << ":";
        c.states.for_each([&](StateId s) { out << " " << mech.states.label(s); });
        out << "\n";
    }
    const auto& X = mech.outcomes;
    for (const auto& c : mech.cells) {
        out << "factor " << c.name << ": " << factor_kind(c.factor);
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, ConstantFactor>) {
                    out << " c=" << X.label(f.c);
                } else {
                    out << " a=" << X.label(f.a) << " b=" << X.label(f.b);
                    if constexpr (std::is_same_v<T, SimpleFactor>) {
                        out << " kbar=" << f.kbar;
                    } else if constexpr (std::is_same_v<T, QuasiDictatorialFactor>) {
                        out << " menu=";
                        for (std::size_t i = 0; i < f.menu.size(); ++i) out << (i ? "|" : "") << render(mech.states, f.menu[i]);
                    } else if constexpr (std::is_same_v<T, DyadicFactor>) {
                        out << " E=" << render(mech.states, f.e) << " F=" << render(mech.states, f.f) << " klo=" << f.klo
                            << " khi=" << f.khi << " H=";
                        if (f.h.is_threshold()) {
                            out << "threshold(" << f.h.threshold_value() << ")";
                        } else {
                            out << "table[";
                            const auto& g = f.h.grid();
                            for (std::size_t r = 0; r < g.size(); ++r) {
                                if (r) out << "; ";
                                for (std::size_t j = 0; j < g[r].size(); ++j) out << (j ? " " : "") << g[r][j];
                            }
                            out << "]";
                        }
                    } else {
                        out << " klo=" << f.filter.klo << " khi=" << f.filter.khi;
                        render_levels(out, mech.states, f.filter, &f.quotas);
                    }
                }
            },
            c.factor);
        out << "\n";
    }
    return out.str();
}

std::string serialize(const FilterDocument& doc) {
    std::ostringstream out;
    out << "states:";
    for (const auto& l : doc.states.labels()) out << " " << l;
    out << "\n";
    for (const auto& f : doc.filters) {
        out << "filter " << f.name << ": klo=" << f.filter.klo << " khi=" << f.filter.khi;
        render_levels(out, doc.states, f.filter, nullptr);
        out << "\n";
    }
    return out.str();
}

}  // namespace seuvote
