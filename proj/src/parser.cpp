#include "folia/parser.hpp"

#include <fstream>
#include <sstream>

#include "folia/errors.hpp"

namespace folia {

namespace {

struct Token {
    enum Kind { Ident, Number, Plus, Minus, Star, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    Rat value;
    int line;
    int col;
};

class Lexer {
public:
    Lexer(const std::string& text, int line) : text_(text), line_(line) {}

    Token next() {
        skip_ws();
        int col = static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size()) return {Token::End, "", Rat(0), line_, col};
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return {Token::Ident, text_.substr(start, pos_ - start), Rat(0), line_, col};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string num = text_.substr(start, pos_ - start);
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                std::size_t dstart = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                std::string den = text_.substr(dstart, pos_ - dstart);
                if (mpz_class(den) == 0) throw ParseError(line_, col, "zero denominator");
                Rat q{mpz_class(num), mpz_class(den)};
                q.canonicalize();
                return {Token::Number, num + "/" + den, q, line_, col};
            }
            return {Token::Number, num, Rat(mpz_class(num)), line_, col};
        }
        ++pos_;
        switch (c) {
            case '+': return {Token::Plus, "+", Rat(0), line_, col};
            case '-': return {Token::Minus, "-", Rat(0), line_, col};
            case '*': return {Token::Star, "*", Rat(0), line_, col};
            case '^': return {Token::Caret, "^", Rat(0), line_, col};
            case '(': return {Token::LParen, "(", Rat(0), line_, col};
            case ')': return {Token::RParen, ")", Rat(0), line_, col};
        }
        throw ParseError(line_, col, std::string("unexpected character '") + c + "'");
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
};

// a section expression evaluates to scalar + sum coeff_a * frame_a; products of two frame
// parts are rejected
struct Value {
    Poly scalar;
    std::vector<Poly> frame;

    bool has_frame() const {
        for (const auto& p : frame)
            if (!p.is_zero()) return true;
        return false;
    }
};

class ExprParser {
public:
    ExprParser(const std::string& text, int line, const std::vector<std::string>& vars,
               const std::vector<std::string>& frames)
        : lexer_(text, line), vars_(vars), frames_(frames) {
        advance();
    }

    Value parse() {
        Value v = expr();
        if (cur_.kind != Token::End)
            throw ParseError(cur_.line, cur_.col, "unexpected '" + cur_.text + "'");
        return v;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    int nvars() const { return static_cast<int>(vars_.size()); }

    Value make_scalar(Poly p) {
        Value v;
        v.scalar = std::move(p);
        v.frame.assign(frames_.size(), Poly(nvars()));
        return v;
    }

    Value expr() {
        Value acc = term();
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            bool minus = cur_.kind == Token::Minus;
            advance();
            Value rhs = term();
            if (minus) {
                acc.scalar -= rhs.scalar;
                for (std::size_t i = 0; i < acc.frame.size(); ++i) acc.frame[i] -= rhs.frame[i];
            } else {
                acc.scalar += rhs.scalar;
                for (std::size_t i = 0; i < acc.frame.size(); ++i) acc.frame[i] += rhs.frame[i];
            }
        }
        return acc;
    }

    Value term() {
        Value acc = factor();
        while (cur_.kind == Token::Star) {
            advance();
            Value rhs = factor();
            acc = multiply(acc, rhs);
        }
        return acc;
    }

    Value multiply(const Value& a, const Value& b) {
        if (a.has_frame() && b.has_frame())
            throw ParseError(cur_.line, cur_.col, "product of two frame sections");
        Value out = make_scalar(a.scalar * b.scalar);
        for (std::size_t i = 0; i < out.frame.size(); ++i)
            out.frame[i] = a.scalar * b.frame[i] + b.scalar * a.frame[i];
        return out;
    }

    Value factor() {
        bool negate = false;
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            if (cur_.kind == Token::Minus) negate = !negate;
            advance();
        }
        Value v = atom();
        if (cur_.kind == Token::Caret) {
            advance();
            if (cur_.kind != Token::Number || cur_.value.get_den() != 1)
                throw ParseError(cur_.line, cur_.col, "exponent must be a nonnegative integer");
            if (v.has_frame())
                throw ParseError(cur_.line, cur_.col, "cannot exponentiate a frame section");
            long e = cur_.value.get_num().get_si();
            if (e < 0) throw ParseError(cur_.line, cur_.col, "negative exponent");
            advance();
            Poly base = v.scalar;
            Poly acc = Poly::constant(nvars(), Rat(1));
            for (long i = 0; i < e; ++i) acc *= base;
            v = make_scalar(std::move(acc));
        }
        if (negate) {
            v.scalar = -v.scalar;
            for (auto& p : v.frame) p = -p;
        }
        return v;
    }

    Value atom() {
        if (cur_.kind == Token::Number) {
            Value v = make_scalar(Poly::constant(nvars(), cur_.value));
            advance();
            return v;
        }
        if (cur_.kind == Token::LParen) {
            advance();
            Value v = expr();
            if (cur_.kind != Token::RParen) throw ParseError(cur_.line, cur_.col, "expected ')'");
            advance();
            return v;
        }
        if (cur_.kind == Token::Ident) {
            for (int i = 0; i < nvars(); ++i)
                if (vars_[i] == cur_.text) {
                    Value v = make_scalar(Poly::variable(nvars(), i));
                    advance();
                    return v;
                }
            for (std::size_t a = 0; a < frames_.size(); ++a)
                if (frames_[a] == cur_.text) {
                    Value v = make_scalar(Poly(nvars()));
                    v.frame[a] = Poly::constant(nvars(), Rat(1));
                    advance();
                    return v;
                }
            throw ParseError(cur_.line, cur_.col, "unknown variable '" + cur_.text + "'");
        }
        if (cur_.kind == Token::End)
            throw ParseError(cur_.line, cur_.col, "unexpected end of expression");
        throw ParseError(cur_.line, cur_.col, "unexpected '" + cur_.text + "'");
    }

    Lexer lexer_;
    Token cur_;
    const std::vector<std::string>& vars_;
    const std::vector<std::string>& frames_;
};

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RatMat parse_matrix_line(const std::string& line, int lineno) {
    RatMat m;
    std::stringstream rows(line);
    std::string row;
    while (std::getline(rows, row, ';')) {
        RatVec r;
        std::stringstream entries(row);
        std::string entry;
        while (entries >> entry) {
            try {
                r.push_back(rat_from_string(entry));
            } catch (const InputError& e) {
                throw ParseError(lineno, 1, e.what());
            }
        }
        if (!r.empty()) m.push_back(std::move(r));
    }
    if (m.empty()) throw ParseError(lineno, 1, "empty matrix line");
    std::size_t cols = m[0].size();
    for (const auto& r : m)
        if (r.size() != cols) throw ParseError(lineno, 1, "ragged matrix rows");
    if (m.size() != cols) throw ParseError(lineno, 1, "matrices must be square");
    return m;
}

}  // namespace

SingularSubalgebroid parse_subalgebroid(const std::string& source, GroebnerOptions opts) {
    std::vector<std::string> vars;
    std::string ambient_kind, ambient_name;
    std::vector<RatMat> matrices;
    std::vector<std::pair<int, std::string>> generator_lines;

    enum class Section { None, Matrices, Generators } section = Section::None;
    std::istringstream in(source);
    std::string raw;
    int lineno = 0;
    bool saw_ambient = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = strip(line);
        if (t.empty()) continue;
        if (t.rfind("vars:", 0) == 0) {
            section = Section::None;
            std::stringstream ss(t.substr(5));
            std::string v;
            while (ss >> v) vars.push_back(v);
            continue;
        }
        if (t.rfind("ambient:", 0) == 0) {
            section = Section::None;
            std::stringstream ss(t.substr(8));
            ss >> ambient_kind;
            ss >> ambient_name;
            if (ambient_kind.empty()) throw ParseError(lineno, 1, "missing ambient kind");
            saw_ambient = true;
            continue;
        }
        if (t == "matrices:") {
            section = Section::Matrices;
            continue;
        }
        if (t == "generators:") {
            section = Section::Generators;
            continue;
        }
        if (section == Section::Matrices) {
            matrices.push_back(parse_matrix_line(t, lineno));
            continue;
        }
        if (section == Section::Generators) {
            if (t[0] != '-') throw ParseError(lineno, 1, "generator lines must start with '-'");
            generator_lines.emplace_back(lineno, strip(t.substr(1)));
            continue;
        }
        throw ParseError(lineno, 1, "unexpected line '" + t + "'");
    }

    if (!saw_ambient) throw ParseError(lineno, 1, "missing 'ambient:' line");
    if (generator_lines.empty()) throw ParseError(lineno, 1, "missing 'generators:' block");

    AmbientAlgebroid ambient = [&] {
        if (ambient_kind == "tangent") {
            if (vars.empty()) throw ParseError(1, 1, "tangent ambient needs a 'vars:' line");
            return AmbientAlgebroid::tangent(vars);
        }
        if (ambient_kind == "action") {
            if (ambient_name == "custom") {
                if (matrices.empty()) throw ParseError(1, 1, "action custom needs a 'matrices:' block");
                return AmbientAlgebroid::linear_action("custom", matrices, vars);
            }
            return AmbientAlgebroid::named(AmbientKind::LinearAction, ambient_name);
        }
        if (ambient_kind == "liealgebra") {
            if (ambient_name == "custom") {
                if (matrices.empty())
                    throw ParseError(1, 1, "liealgebra custom needs a 'matrices:' block");
                return AmbientAlgebroid::lie_algebra("custom", matrices);
            }
            return AmbientAlgebroid::named(AmbientKind::LieAlgebra, ambient_name);
        }
        throw ParseError(1, 1, "unknown ambient kind '" + ambient_kind + "'");
    }();

    if (ambient.kind() == AmbientKind::LinearAction && !vars.empty() &&
        vars != ambient.var_names()) {
        // named actions fix their own coordinates; a custom action already used vars
        if (ambient_name != "custom")
            throw ParseError(1, 1, "vars line conflicts with the named action's coordinates");
    }

    std::vector<std::string> frame_names = ambient.frame_names();
    const std::vector<std::string>& pvars = ambient.var_names();
    std::vector<FreeModuleElem> gens;
    for (const auto& [gline, text] : generator_lines) {
        ExprParser p(text, gline, pvars, frame_names);
        Value v = p.parse();
        if (!v.scalar.is_zero())
            throw ParseError(gline, 1, "generator has a scalar part without a frame element");
        gens.push_back(v.frame.empty() ? FreeModuleElem(0, 0) : FreeModuleElem(v.frame));
    }
    return SingularSubalgebroid(std::move(ambient), std::move(gens), opts);
}

SingularSubalgebroid load_subalgebroid(const std::string& path, GroebnerOptions opts) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_subalgebroid(ss.str(), opts);
}

std::string print_subalgebroid(const SingularSubalgebroid& B) {
    const AmbientAlgebroid& amb = B.ambient();
    std::ostringstream os;
    if (!amb.var_names().empty()) {
        os << "vars:";
        for (const auto& v : amb.var_names()) os << " " << v;
        os << "\n";
    }
    switch (amb.kind()) {
        case AmbientKind::Tangent: os << "ambient: tangent\n"; break;
        case AmbientKind::LinearAction: os << "ambient: action " << amb.name() << "\n"; break;
        case AmbientKind::LieAlgebra: os << "ambient: liealgebra " << amb.name() << "\n"; break;
    }
    if (amb.name() == "custom") {
        os << "matrices:\n";
        for (const auto& m : amb.realization()) {
            os << " ";
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i) os << ";";
                for (const auto& x : m[i]) os << " " << x.get_str();
            }
            os << "\n";
        }
    }
    os << "generators:\n";
    std::vector<std::string> frames = amb.frame_names();
    for (const auto& g : B.generators())
        os << " - " << g.to_string(amb.var_names(), frames) << "\n";
    return os.str();
}

FreeModuleElem parse_section(const std::string& expr, const AmbientAlgebroid& ambient) {
    std::vector<std::string> frames = ambient.frame_names();
    ExprParser p(expr, 1, ambient.var_names(), frames);
    Value v = p.parse();
    if (!v.scalar.is_zero()) throw InputError("section has a scalar part without a frame element");
    return v.frame.empty() ? FreeModuleElem(0, 0) : FreeModuleElem(v.frame);
}

Poly parse_poly(const std::string& expr, const std::vector<std::string>& var_names) {
    std::vector<std::string> no_frames;
    ExprParser p(expr, 1, var_names, no_frames);
    Value v = p.parse();
    return v.scalar;
}

}  // namespace folia
