#include "obstructa/novikov.hpp"

#include <algorithm>
#include <sstream>

namespace obstructa {

static bool term_order(const NovTerm& a, const NovTerm& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.eexp < b.eexp;
}

NovikovScalar NovikovScalar::zero(const Rat& ceiling, const Rat& floor) {
    NovikovScalar s;
    s.ceiling_ = ceiling;
    s.floor_ = floor;
    return s;
}

NovikovScalar NovikovScalar::one(const Rat& ceiling, const Rat& floor) {
    return monomial(1, 0, 0, ceiling, floor);
}

NovikovScalar NovikovScalar::monomial(const Rat& c, const Rat& energy, long eexp,
                                      const Rat& ceiling, const Rat& floor) {
    return normalized({NovTerm{c, energy, eexp}}, ceiling, floor);
}

NovikovScalar NovikovScalar::normalized(std::vector<NovTerm> raw, const Rat& ceiling,
                                        const Rat& floor) {
    for (const auto& t : raw)
        if (t.energy < floor)
            throw DomainError("term energy " + to_string(t.energy) + " below floor " +
                              to_string(floor));
    std::sort(raw.begin(), raw.end(), term_order);
    NovikovScalar s;
    s.ceiling_ = ceiling;
    s.floor_ = floor;
    for (auto& t : raw) {
        if (t.energy >= ceiling) continue;
        if (!s.terms_.empty() && s.terms_.back().energy == t.energy &&
            s.terms_.back().eexp == t.eexp) {
            s.terms_.back().coeff += t.coeff;
            if (s.terms_.back().coeff == 0) s.terms_.pop_back();
        } else if (t.coeff != 0) {
            s.terms_.push_back(std::move(t));
        }
    }
    return s;
}

bool NovikovScalar::is_one() const {
    return terms_.size() == 1 && terms_[0].coeff == 1 && terms_[0].energy == 0 &&
           terms_[0].eexp == 0;
}

Valuation NovikovScalar::valuation() const {
    if (terms_.empty()) return Valuation{};
    return Valuation{terms_.front().energy};
}

void NovikovScalar::check_compatible(const NovikovScalar& o) const {
    if (ceiling_ != o.ceiling_)
        throw ConfigError("mismatched energy ceilings: " + to_string(ceiling_) + " vs " +
                          to_string(o.ceiling_));
}

NovikovScalar NovikovScalar::operator+(const NovikovScalar& o) const {
    if (terms_.empty()) return o;
    if (o.terms_.empty()) return *this;
    check_compatible(o);
    std::vector<NovTerm> raw = terms_;
    raw.insert(raw.end(), o.terms_.begin(), o.terms_.end());
    return normalized(std::move(raw), ceiling_, std::min(floor_, o.floor_));
}

NovikovScalar NovikovScalar::operator-(const NovikovScalar& o) const {
    return *this + (-o);
}

NovikovScalar NovikovScalar::operator-() const {
    NovikovScalar s = *this;
    for (auto& t : s.terms_) t.coeff = -t.coeff;
    return s;
}

NovikovScalar NovikovScalar::scaled(const Rat& c) const {
    if (c == 0) return zero(ceiling_, floor_);
    NovikovScalar s = *this;
    for (auto& t : s.terms_) t.coeff *= c;
    return s;
}

NovikovScalar NovikovScalar::operator*(const NovikovScalar& o) const {
    if (terms_.empty()) return *this;
    if (o.terms_.empty()) return o;
    check_compatible(o);
    std::vector<NovTerm> raw;
    raw.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            Rat e = a.energy + b.energy;
            if (e >= ceiling_) continue;
            raw.push_back(NovTerm{a.coeff * b.coeff, e, a.eexp + b.eexp});
        }
    return normalized(std::move(raw), ceiling_, std::min(floor_, o.floor_));
}

NovikovScalar NovikovScalar::shifted(const Rat& energy, long eexp) const {
    std::vector<NovTerm> raw;
    raw.reserve(terms_.size());
    Rat fl = floor_;
    for (const auto& t : terms_) {
        Rat e = t.energy + energy;
        if (e < fl) fl = e;
        raw.push_back(NovTerm{t.coeff, e, t.eexp + eexp});
    }
    return normalized(std::move(raw), ceiling_, fl);
}

NovikovScalar NovikovScalar::retruncated(const Rat& ceiling, const Rat& floor) const {
    return normalized(terms_, ceiling, floor);
}

bool NovikovScalar::operator==(const NovikovScalar& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].energy != o.terms_[i].energy ||
            terms_[i].eexp != o.terms_[i].eexp)
            return false;
    return true;
}

NovikovScalar NovikovScalar::inverted() const {
    if (terms_.empty()) throw DivisionError("division by the zero Novikov scalar");
    const Rat lead_energy = terms_.front().energy;
    std::size_t nlead = 0;
    while (nlead < terms_.size() && terms_[nlead].energy == lead_energy) ++nlead;
    if (nlead != 1)
        throw NotMonomialInvertibleError(
            "leading part at energy " + to_string(lead_energy) + " has " +
            std::to_string(nlead) + " terms; not monomial-invertible");
    const NovTerm lead = terms_.front();

    // a = c T^{l0} e^{q0} (1 + h): divide through by the leading monomial.
    Rat neg_lead = lead_energy > 0 ? Rat(-lead_energy) : Rat(0);
    Rat floor = std::min(floor_, neg_lead);
    std::vector<NovTerm> hraw;
    for (std::size_t i = 1; i < terms_.size(); ++i)
        hraw.push_back(NovTerm{terms_[i].coeff / lead.coeff, terms_[i].energy - lead_energy,
                               terms_[i].eexp - lead.eexp});
    NovikovScalar h = normalized(std::move(hraw), ceiling_, 0);
    NovikovScalar series = h.geometric_alt();
    return series.shifted(-lead_energy, -lead.eexp).scaled(1 / lead.coeff).retruncated(
        ceiling_, floor);
}

NovikovScalar NovikovScalar::geometric_alt() const {
    const NovikovScalar one_ = one(ceiling_, floor_);
    if (terms_.empty()) return one_;
    Valuation v = valuation();
    // A scalar of valuation <= 0 is never nilpotent: its minimal (energy, q)
    // corner term survives in every power. (Positive-length dual series, which
    // can be nilpotent, run their own expansion in ce_dual.)
    if (!v.is_infinite() && *v.value <= 0)
        throw DivergenceError("geometric series needs positive valuation, got " +
                              to_string(*v.value));
    NovikovScalar acc = one_;
    NovikovScalar power = one_;
    int sign = -1;
    while (true) {
        power = power * *this;
        if (power.is_zero()) break;
        acc = acc + (sign > 0 ? power : -power);
        sign = -sign;
    }
    return acc;
}

std::string NovikovScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool has_T = t.energy != 0;
        bool has_e = t.eexp != 0;
        bool printed = false;
        if (c != 1 || (!has_T && !has_e)) {
            os << to_string(c);
            printed = true;
        }
        if (has_T) {
            if (printed) os << "*";
            os << "T^" << to_string(t.energy);
            printed = true;
        }
        if (has_e) {
            if (printed) os << "*";
            os << "e^" << t.eexp;
        }
    }
    return os.str();
}

NovikovScalar NovikovScalar::parse(const std::string& text, const Rat& ceiling,
                                   const Rat& floor) {
    std::vector<NovTerm> raw;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
    skip_ws();
    if (i < text.size() && text.compare(i, 1, "0") == 0 && i + 1 == text.size())
        return zero(ceiling, floor);
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    while (i < text.size()) {
        skip_ws();
        NovTerm t{neg ? Rat(-1) : Rat(1), 0, 0};
        bool saw_factor = false;
        while (i < text.size()) {
            skip_ws();
            if (i >= text.size() || text[i] == '+' || text[i] == '-') break;
            if (text[i] == '*') {
                ++i;
                continue;
            }
            if (text[i] == 'T') {
                ++i;
                if (i >= text.size() || text[i] != '^')
                    throw ParseError("expected '^' after T", 0, (int)i);
                ++i;
                std::size_t j = i;
                if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
                while (j < text.size() && (isdigit(text[j]) || text[j] == '/')) ++j;
                t.energy = parse_rat(text.substr(i, j - i));
                i = j;
            } else if (text[i] == 'e') {
                ++i;
                if (i >= text.size() || text[i] != '^')
                    throw ParseError("expected '^' after e", 0, (int)i);
                ++i;
                std::size_t j = i;
                if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
                while (j < text.size() && isdigit(text[j])) ++j;
                t.eexp = std::stol(text.substr(i, j - i));
                i = j;
            } else {
                std::size_t j = i;
                if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
                while (j < text.size() && (isdigit(text[j]) || text[j] == '/')) ++j;
                if (j == i) throw ParseError("unexpected character in scalar", 0, (int)i);
                t.coeff *= parse_rat(text.substr(i, j - i));
                i = j;
            }
            saw_factor = true;
        }
        if (!saw_factor) throw ParseError("empty term in scalar", 0, (int)i);
        raw.push_back(t);
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] == '+')
            neg = false;
        else if (text[i] == '-')
            neg = true;
        else
            throw ParseError("expected '+' or '-' between terms", 0, (int)i);
        ++i;
    }
    return normalized(std::move(raw), ceiling, floor);
}

NovikovScalar nov_normalize(std::vector<NovTerm> raw, const Rat& ceiling, const Rat& floor) {
    return NovikovScalar::normalized(std::move(raw), ceiling, floor);
}

}  // namespace obstructa
