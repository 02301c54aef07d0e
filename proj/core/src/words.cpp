#include "qsc/words.hpp"

#include <sstream>

namespace qsc {

template class BasicWordSeries<AdditiveMonoid>;

namespace {

const std::string kMiddleDot = "\xc2\xb7";  // '·'

std::string word_str(const Word& w) {
    if (w.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(w[i]);
    }
    return out;
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        const Integer num(text.substr(0, slash));
        const Integer den(text.substr(slash + 1));
        if (den == 0) throw Error("zero denominator in coefficient: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error("malformed coefficient: " + text);
    }
}

// One term: "[p[/q]·]letters" with '*' accepted for '·'.
void parse_term(const std::string& term, int sign, WordSeries& out) {
    std::string coeff = "1";
    std::string rest = term;
    auto dot = term.find(kMiddleDot);
    std::size_t dot_len = kMiddleDot.size();
    if (dot == std::string::npos) {
        dot = term.find('*');
        dot_len = 1;
    }
    if (dot != std::string::npos) {
        coeff = term.substr(0, dot);
        rest = term.substr(dot + dot_len);
    }
    while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    while (!rest.empty() && rest.back() == ' ') rest.pop_back();
    if (rest.empty()) throw Error("empty term in series: '" + term + "'");
    Word w;
    if (rest != "e") w = parse_word(rest);
    out.add_term(std::move(w), sign * parse_rational(coeff));
}

}  // namespace

// Terms print longest-first (reverse of the internal length-lex order),
// matching the order the product recursion generates on small examples,
// e.g. 2 3 prec 1 = "2 3 1 + 2 1 3 + 2 4".
std::string to_string(const WordSeries& s) {
    if (s.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = s.terms().rbegin(); it != s.terms().rend(); ++it) {
        const auto& [w, c] = *it;
        const bool neg = c < 0;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        const Rational a = neg ? Rational(-c) : c;
        if (a != 1) out += rational_str(a) + kMiddleDot;
        out += word_str(w);
        first = false;
    }
    return out;
}

Word parse_word(const std::string& text) {
    Word w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        for (char ch : tok)
            if (ch < '0' || ch > '9') throw Error("word letters must be positive integers: '" + tok + "'");
        const unsigned long v = std::stoul(tok);
        if (v == 0 || v > 0xffffffffull) throw Error("word letter out of range: '" + tok + "'");
        w.push_back(static_cast<Letter>(v));
    }
    return w;
}

WordSeries parse_word_series(const std::string& text) {
    WordSeries out;
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) throw Error("empty series text");
    if (text.compare(pos, std::string::npos, "0") == 0) return out;

    int sign = 1;
    if (text[pos] == '-') {
        sign = -1;
        ++pos;
    } else if (text[pos] == '+') {
        ++pos;
    }
    while (true) {
        std::size_t plus = text.find(" + ", pos);
        std::size_t minus = text.find(" - ", pos);
        std::size_t cut = std::min(plus, minus);
        parse_term(text.substr(pos, cut == std::string::npos ? cut : cut - pos), sign, out);
        if (cut == std::string::npos) break;
        sign = (cut == minus) ? -1 : 1;
        pos = cut + 3;
    }
    return out;
}

}  // namespace qsc
