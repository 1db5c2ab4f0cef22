#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "tsreg/errors.hpp"

namespace tsreg {

enum class TermKind { column, power, sine, cosine };

/// One design column derived from an input column: the column itself, an
/// integer power I(col^k) with k in {2,3,4}, or sin/cos(c*pi*col).
struct FormulaTerm {
    TermKind kind = TermKind::column;
    std::string column;
    int power = 0;
    double multiplier = 0.0;

    double eval(double x) const {
        switch (kind) {
            case TermKind::column: return x;
            case TermKind::power: return std::pow(x, power);
            case TermKind::sine: return std::sin(multiplier * M_PI * x);
            case TermKind::cosine: return std::cos(multiplier * M_PI * x);
        }
        return x;
    }

    std::string label() const {
        char buf[96];
        switch (kind) {
            case TermKind::column: return column;
            case TermKind::power:
                std::snprintf(buf, sizeof(buf), "I(%s^%d)", column.c_str(), power);
                return buf;
            case TermKind::sine:
                std::snprintf(buf, sizeof(buf), "sin(%g*pi*%s)", multiplier, column.c_str());
                return buf;
            case TermKind::cosine:
                std::snprintf(buf, sizeof(buf), "cos(%g*pi*%s)", multiplier, column.c_str());
                return buf;
        }
        return column;
    }
};

struct Formula {
    std::string response;
    std::vector<FormulaTerm> terms;
    bool intercept = true;

    /// Canonical text; re-parsing it yields a structurally identical formula.
    std::string pretty() const {
        std::string out = response + " ~ ";
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i > 0) out += " + ";
            out += terms[i].label();
        }
        if (terms.empty()) out += "1";
        if (!intercept) out += " - 1";
        return out;
    }
};

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula formula;
        formula.response = expect_identifier("response column");
        skip_ws();
        expect('~');
        parse_term_list(formula);
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected trailing input", pos_);
        }
        for (const FormulaTerm& term : formula.terms) {
            if (term.column == formula.response) {
                throw ParseError("response '" + formula.response + "' used as a term", 0);
            }
        }
        return formula;
    }

private:
    void parse_term_list(Formula& formula) {
        parse_term_or_suppressor(formula);
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) break;
            const char c = text_[pos_];
            if (c == '+') {
                ++pos_;
                parse_term(formula);
            } else if (c == '-') {
                ++pos_;
                parse_intercept_suppressor(formula);
            } else {
                break;
            }
        }
    }

    void parse_term_or_suppressor(Formula& formula) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            parse_intercept_suppressor(formula);
            return;
        }
        parse_term(formula);
    }

    void parse_intercept_suppressor(Formula& formula) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '1') {
            throw ParseError("expected '1' after '-' (intercept suppressor)", pos_);
        }
        ++pos_;
        formula.intercept = false;
    }

    void parse_term(Formula& formula) {
        skip_ws();
        const std::size_t start = pos_;
        const std::string ident = expect_identifier("term");
        skip_ws();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';

        FormulaTerm term;
        if (call && ident == "I") {
            ++pos_;
            term.kind = TermKind::power;
            term.column = expect_identifier("column inside I()");
            skip_ws();
            expect('^');
            term.power = expect_integer();
            if (term.power < 2 || term.power > 4) {
                throw ParseError("power out of range, expected 2..4", start);
            }
            skip_ws();
            expect(')');
        } else if (call && (ident == "sin" || ident == "cos")) {
            ++pos_;
            term.kind = ident == "sin" ? TermKind::sine : TermKind::cosine;
            term.multiplier = expect_number();
            skip_ws();
            expect('*');
            const std::size_t pi_at = pos_;
            if (expect_identifier("pi") != "pi") {
                throw ParseError("expected 'pi' in trigonometric term", pi_at);
            }
            skip_ws();
            expect('*');
            term.column = expect_identifier("column inside trig term");
            skip_ws();
            expect(')');
        } else if (call) {
            throw ParseError("unknown function '" + ident + "'", start);
        } else {
            term.kind = TermKind::column;
            term.column = ident;
        }
        formula.terms.push_back(std::move(term));
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    std::string expect_identifier(const char* what) {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
            throw ParseError(std::string("expected identifier (") + what + ")", pos_);
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    int expect_integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected integer", start);
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    double expect_number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected number", start);
        try {
            return std::stod(std::string(text_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            throw ParseError("malformed number", start);
        }
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the mini formula grammar
///   resp ~ term (+ term)* [- 1]
///   term := IDENT | I(IDENT^INT) | sin(NUM*pi*IDENT) | cos(NUM*pi*IDENT)
/// Whitespace is insignificant; '-1' suppresses the intercept.
inline Formula parse_formula(std::string_view text) {
    return detail::FormulaParser(text).parse();
}

}  // namespace tsreg
