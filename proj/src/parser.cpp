#include "darboux/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace darboux {

ParseError::ParseError(const std::string &msg, size_t offset, const std::string &context)
    : Error(context + msg + " at byte " + std::to_string(offset)), msg_(msg), offset_(offset) {}

namespace {

class Parser {
  public:
    explicit Parser(std::string_view s) : s_(s) {}

    BivarPoly parse() {
        skip();
        if (pos_ == s_.size())
            throw ParseError("empty expression", pos_);
        BivarPoly p = expr();
        skip();
        if (pos_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return p;
    }

  private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    BivarPoly expr() {
        BivarPoly acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    BivarPoly term() {
        BivarPoly acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                size_t at = pos_;
                BivarPoly d = unary();
                if (!d.is_constant())
                    throw ParseError("division by a non-constant expression", at);
                if (d.is_zero())
                    throw ParseError("division by zero", at);
                acc *= d.coeff(0, 0).inverse();
            } else {
                return acc;
            }
        }
    }

    BivarPoly unary() {
        if (accept('-'))
            return -unary();
        if (accept('+'))
            return unary();
        return power();
    }

    BivarPoly power() {
        BivarPoly base = primary();
        if (!accept('^'))
            return base;
        size_t at = pos_;
        bool negative = accept('-');
        BivarPoly e = power();
        if (!e.is_constant() || !e.coeff(0, 0).is_integer())
            throw ParseError("exponent must be an integer constant", at);
        mpz_class n = e.coeff(0, 0).re().get_num();
        if (negative)
            n = -n;
        if (n > 1000 || n < -1000)
            throw ParseError("exponent out of range", at);
        long k = n.get_si();
        if (k < 0) {
            if (!base.is_constant() || base.is_zero())
                throw ParseError("negative exponent of a non-constant expression", at);
            return BivarPoly(base.coeff(0, 0).pow(k));
        }
        return base.pow(static_cast<int>(k));
    }

    BivarPoly primary() {
        skip();
        if (pos_ == s_.size())
            throw ParseError("unexpected end of expression", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            BivarPoly p = expr();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            if (id == "x")
                return BivarPoly::x();
            if (id == "y")
                return BivarPoly::y();
            if (id == "i")
                return BivarPoly(GR::i());
            throw ParseError("unknown identifier '" + std::string(id) + "'", start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    BivarPoly number() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        mpz_class num(std::string(s_.substr(start, pos_ - start)));
        mpz_class den = 1;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            size_t fs = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (pos_ == fs)
                throw ParseError("malformed decimal number", fs);
            std::string frac(s_.substr(fs, pos_ - fs));
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
            num = num * den + mpz_class(frac);
        }
        return BivarPoly(GR(mpq_class(num, den)));
    }

    std::string_view s_;
    size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return std::string(s.substr(a, b - a));
}

} // namespace

BivarPoly parse_polynomial(std::string_view text) { return Parser(text).parse(); }

SystemSpec parse_system_file(std::string_view text) {
    SystemSpec spec;
    bool have_dx = false, have_dy = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string t = trim(line);
        if (t.empty())
            continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error("line " + std::to_string(lineno) + ": expected '<name> = <value>'");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key == "dx") {
            spec.P_text = value;
            have_dx = true;
        } else if (key == "dy") {
            spec.Q_text = value;
            have_dy = true;
        } else if (key.rfind("option.", 0) == 0 && key.size() > 7) {
            spec.options[key.substr(7)] = value;
        } else {
            throw Error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_dx || !have_dy)
        throw Error("system file needs both 'dx =' and 'dy =' lines");
    return spec;
}

SystemSpec load_system_file(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_system_file(ss.str());
}

PlanarSystem parse_system(const SystemSpec &spec) {
    BivarPoly P, Q;
    try {
        P = parse_polynomial(spec.P_text);
    } catch (const ParseError &e) {
        throw ParseError(e.message(), e.offset(), "dx: ");
    }
    try {
        Q = parse_polynomial(spec.Q_text);
    } catch (const ParseError &e) {
        throw ParseError(e.message(), e.offset(), "dy: ");
    }
    return PlanarSystem(std::move(P), std::move(Q));
}

} // namespace darboux
