#include "folia/rational.hpp"

#include <sstream>

#include "folia/errors.hpp"

namespace folia {

Rat rat(long num, long den) {
    if (den == 0) throw InputError("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat rat_from_string(const std::string& text) {
    if (text.empty()) throw InputError("empty rational literal");
    std::size_t slash = text.find('/');
    auto check_int = [&](const std::string& s) {
        if (s.empty()) throw InputError("malformed rational '" + text + "'");
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size()) throw InputError("malformed rational '" + text + "'");
        for (std::size_t i = start; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw InputError("malformed rational '" + text + "'");
    };
    if (slash == std::string::npos) {
        check_int(text);
        return Rat(mpz_class(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    check_int(num);
    check_int(den);
    mpz_class d(den);
    if (d == 0) throw InputError("zero denominator in '" + text + "'");
    Rat q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& q) {
    return q.get_str();
}

double to_double(const Rat& q) {
    return q.get_d();
}

RatVec rat_point_from_string(const std::string& text) {
    RatVec out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        // trim spaces
        std::size_t a = part.find_first_not_of(" \t");
        std::size_t b = part.find_last_not_of(" \t");
        if (a == std::string::npos) throw InputError("empty component in point '" + text + "'");
        out.push_back(rat_from_string(part.substr(a, b - a + 1)));
    }
    if (out.empty()) throw InputError("empty point");
    return out;
}

std::string to_string(const RatVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s;
}

std::vector<double> to_doubles(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

}  // namespace folia
