#include "compcorr/filter.hpp"

#include "compcorr/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace compcorr {

RecordFilter::RecordFilter(std::vector<Comparison> terms) : terms_(std::move(terms))
{
    for (const auto& t : terms_) {
        if (!std::isfinite(t.threshold) || t.threshold < -1.0 || t.threshold > 1.0) {
            throw InvalidArgument("filter threshold " + std::to_string(t.threshold) + " is outside [-1, 1]");
        }
    }
}

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }
    // Case-insensitive keyword match (identifier characters plus parentheses).
    bool accept_word(std::string_view word)
    {
        skip_space();
        if (text_.size() - pos_ < word.size()) {
            return false;
        }
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(text_[pos_ + i])) != word[i]) {
                return false;
            }
        }
        const std::size_t end = pos_ + word.size();
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(word.back())) &&
            (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            return false;
        }
        pos_ = end;
        return true;
    }
    FilterOp op()
    {
        skip_space();
        if (accept_word("<=")) {
            return FilterOp::less_equal;
        }
        if (accept_word(">=")) {
            return FilterOp::greater_equal;
        }
        if (accept_word("<")) {
            return FilterOp::less;
        }
        if (accept_word(">")) {
            return FilterOp::greater;
        }
        throw error("expected one of <, <=, >, >=");
    }
    double number()
    {
        skip_space();
        std::string_view rest = text_.substr(pos_);
        if (!rest.empty() && rest.front() == '+') {
            rest.remove_prefix(1);
            ++pos_;
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
        if (ec != std::errc{}) {
            throw error("expected a number");
        }
        pos_ += static_cast<std::size_t>(ptr - rest.data());
        return v;
    }
    ParseError error(const std::string& what) const
    {
        return ParseError("filter '" + std::string(text_) + "', position " + std::to_string(pos_) + ": " + what);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

bool compare(double lhs, FilterOp op, double rhs)
{
    switch (op) {
    case FilterOp::less:
        return lhs < rhs;
    case FilterOp::less_equal:
        return lhs <= rhs;
    case FilterOp::greater:
        return lhs > rhs;
    case FilterOp::greater_equal:
        return lhs >= rhs;
    }
    return false;
}

} // namespace

RecordFilter RecordFilter::parse(std::string_view expression)
{
    Lexer lex(expression);
    std::vector<Comparison> terms;
    if (lex.at_end()) {
        return RecordFilter();
    }
    do {
        FilterField field;
        if (lex.accept_word("abs(")) {
            if (!lex.accept_word("pearson") || !lex.accept_word(")")) {
                throw lex.error("only abs(pearson) is supported");
            }
            field = FilterField::abs_pearson;
        } else if (lex.accept_word("hcc")) {
            field = FilterField::hcc;
        } else if (lex.accept_word("lcc")) {
            field = FilterField::lcc;
        } else if (lex.accept_word("pearson")) {
            field = FilterField::pearson;
        } else {
            throw lex.error("expected hcc, lcc, pearson or abs(pearson)");
        }
        const FilterOp op = lex.op();
        const double threshold = lex.number();
        terms.push_back({field, op, threshold});
    } while (lex.accept_word("and"));
    if (!lex.at_end()) {
        throw lex.error("unexpected trailing text (terms are joined with AND)");
    }
    return RecordFilter(std::move(terms));
}

bool RecordFilter::accepts(const CorrValue& hcc, const CorrValue& pearson, const CorrValue& lcc) const
{
    for (const auto& t : terms_) {
        const CorrValue* v = nullptr;
        switch (t.field) {
        case FilterField::hcc:
            v = &hcc;
            break;
        case FilterField::lcc:
            v = &lcc;
            break;
        case FilterField::pearson:
        case FilterField::abs_pearson:
            v = &pearson;
            break;
        }
        if (!v->defined()) {
            return false;
        }
        const double x = t.field == FilterField::abs_pearson ? std::abs(**v) : **v;
        if (!compare(x, t.op, t.threshold)) {
            return false;
        }
    }
    return true;
}

std::string RecordFilter::to_string() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (i) {
            out << " AND ";
        }
        switch (t.field) {
        case FilterField::hcc:
            out << "hcc";
            break;
        case FilterField::lcc:
            out << "lcc";
            break;
        case FilterField::pearson:
            out << "pearson";
            break;
        case FilterField::abs_pearson:
            out << "abs(pearson)";
            break;
        }
        switch (t.op) {
        case FilterOp::less:
            out << '<';
            break;
        case FilterOp::less_equal:
            out << "<=";
            break;
        case FilterOp::greater:
            out << '>';
            break;
        case FilterOp::greater_equal:
            out << ">=";
            break;
        }
        out << t.threshold;
    }
    return out.str();
}

} // namespace compcorr
