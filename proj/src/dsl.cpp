#include "stphase/dsl.hpp"

#include "stphase/errors.hpp"

#include <cctype>
#include <map>
#include <set>

namespace stphase {

namespace {

enum class Tok { integer, ident, symbol, direct_sum, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan at;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        const SourceSpan at{line, col};
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            out.push_back({Tok::integer, std::string(src.substr(i, j - i)), at});
            advance(j - i);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), at});
            advance(j - i);
        } else if (src.substr(i, 3) == "(+)") {
            out.push_back({Tok::direct_sum, "(+)", at});
            advance(3);
        } else if (std::string_view("()[],:;=+-*/^").find(c) != std::string_view::npos) {
            out.push_back({Tok::symbol, std::string(1, c), at});
            advance(1);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({Tok::end, "", {line, col}});
    return out;
}

const std::set<std::string> kReserved{"El", "Reg", "rho", "phi", "R", "res", "zeta", "root", "i", "O"};

// num / den with den an exact Laurent polynomial; den == 1 for plain series and scalars.
struct Value {
    LaurentSeries num;
    LaurentSeries den = LaurentSeries::constant(FieldElement(1));

    bool is_plain() const { return den.is_monomial() && den.terms().begin()->first == 0 && den.leading().is_one(); }
    bool is_scalar() const {
        return is_plain() && num.exact() && (num.terms().empty() || (num.is_monomial() && num.terms().begin()->first == 0));
    }
    FieldElement scalar() const { return num.terms().empty() ? FieldElement() : num.leading(); }
};

Value normalized(Value v) {
    if (v.den.is_monomial()) {
        v.num = v.num * v.den.inverse();
        v.den = LaurentSeries::constant(FieldElement(1));
    }
    return v;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    ParsedDocument document() {
        ParsedDocument doc;
        if (peek().kind == Tok::end) {
            return doc;
        }
        if (!(peek().kind == Tok::ident && peek(1).text == "=" && peek(1).kind == Tok::symbol)) {
            const SourceSpan at = peek().at;
            FormalConnection c = connection();
            accept(";");
            expect_end();
            doc.bare = true;
            doc.statements.push_back({"", std::move(c), at});
            return doc;
        }
        while (peek().kind != Tok::end) {
            const Token name = next();
            if (name.kind != Tok::ident) {
                fail("expected a statement name", name);
            }
            if (kReserved.count(name.text)) {
                fail("'" + name.text + "' is reserved and cannot name a statement", name);
            }
            if (names_.count(name.text)) {
                fail("'" + name.text + "' is already defined", name);
            }
            expect("=");
            FormalConnection c = connection();
            expect(";");
            names_[name.text] = c;
            doc.statements.push_back({name.text, std::move(c), name.at});
        }
        return doc;
    }

    FieldElement scalar_only() {
        const Token start = peek();
        const Value v = expr();
        expect_end();
        return as_scalar(v, start);
    }

    RegularPart jordan_only() {
        RegularPart r = jordan();
        expect_end();
        return r;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, FormalConnection> names_;
    // Series variable of the El being parsed; empty outside series context.
    std::optional<std::string> var_;
    bool series_context_ = false;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) {
            ++pos_;
        }
        return t;
    }

    [[noreturn]] static void fail(const std::string& msg, const Token& at) {
        throw ParseError(msg, at.at.line, at.at.column);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end:
            return "end of input";
        case Tok::direct_sum:
            return "'(+)'";
        default:
            return "'" + t.text + "'";
        }
    }

    bool is_symbol(const std::string& s, std::size_t k = 0) const {
        return peek(k).kind == Tok::symbol && peek(k).text == s;
    }
    bool accept(const std::string& s) {
        if (is_symbol(s)) {
            next();
            return true;
        }
        return false;
    }
    void expect(const std::string& s) {
        if (!accept(s)) {
            fail("expected '" + s + "', found " + describe(peek()), peek());
        }
    }
    void expect_keyword(const std::string& kw) {
        if (peek().kind != Tok::ident || peek().text != kw) {
            fail("expected '" + kw + "', found " + describe(peek()), peek());
        }
        next();
    }
    void expect_end() {
        if (peek().kind != Tok::end) {
            fail("unexpected " + describe(peek()) + " after the expression", peek());
        }
    }

    long integer() {
        const Token t = next();
        if (t.kind != Tok::integer) {
            fail("expected an integer, found " + describe(t), t);
        }
        if (t.text.size() > 17) {
            fail("integer literal too large", t);
        }
        return std::stol(t.text);
    }
    long signed_integer() {
        const bool neg = accept("-");
        if (!neg) {
            accept("+");
        }
        if (peek().kind != Tok::integer) {
            fail("exponent must be an integer, found " + describe(peek()), peek());
        }
        const long v = integer();
        return neg ? -v : v;
    }

    // ---------------------------------------------------------------- connections

    FormalConnection connection() {
        FormalConnection out = term();
        while (peek().kind == Tok::direct_sum) {
            next();
            out = out + term();
        }
        return out;
    }

    FormalConnection term() {
        const Token t = peek();
        if (t.kind != Tok::ident) {
            fail("expected 'El(', 'Reg(' or a statement name, found " + describe(t), t);
        }
        if (t.text == "El") {
            return elementary();
        }
        if (t.text == "Reg") {
            next();
            expect("(");
            expect_keyword("R");
            expect("=");
            RegularPart r = jordan();
            expect(")");
            if (r.empty()) {
                return FormalConnection();
            }
            return ElementaryConnection::regular(std::move(r));
        }
        next();
        auto it = names_.find(t.text);
        if (it == names_.end()) {
            fail("unknown name '" + t.text + "'", t);
        }
        return it->second;
    }

    ElementaryConnection elementary() {
        const Token head = next();
        expect("(");
        var_.reset();
        series_context_ = true;
        expect_keyword("rho");
        expect("=");
        const Token rho_at = peek();
        Value rho = expr();
        expect(",");
        expect_keyword("phi");
        expect("=");
        const Token phi_at = peek();
        Value phi = normalized(expr());
        series_context_ = false;
        expect(",");
        expect_keyword("R");
        expect("=");
        const Token r_at = peek();
        RegularPart r = jordan();
        expect(")");
        if (r.empty()) {
            fail("El needs a nonempty regular part", r_at);
        }

        RamificationMap map = ramification(rho, rho_at);
        if (!phi.is_plain()) {
            fail("phi must be a Laurent series (its denominator is not a monomial)", phi_at);
        }
        try {
            return ElementaryConnection(std::move(map), phi.num.renamed("u"), std::move(r));
        } catch (const DomainError& e) {
            fail(e.what(), head);
        }
    }

    static RamificationMap ramification(Value v, const Token& at) {
        if (!v.den.exact()) {
            fail("the denominator of rho must be known exactly", at);
        }
        if (v.num.terms().empty()) {
            fail("rho must be nonzero", at);
        }
        // scale so the denominator has valuation 0 and constant term 1
        const auto low = *v.den.terms().begin();
        const LaurentSeries unit = LaurentSeries::monomial(low.second, low.first).inverse();
        v.num = (v.num * unit).renamed("u");
        v.den = (v.den * unit).renamed("u");
        const long val = *v.num.valuation();
        if (val < 1) {
            fail("rho must have valuation >= 1 (found a term of degree " + std::to_string(val) + ")", at);
        }
        try {
            return v.is_plain() ? RamificationMap(v.num) : RamificationMap(v.num, v.den);
        } catch (const DomainError& e) {
            fail(e.what(), at);
        }
    }

    RegularPart jordan() {
        expect("[");
        std::vector<JordanBlock> blocks;
        if (accept("]")) {
            return RegularPart();
        }
        do {
            expect("(");
            const Token eig_at = peek();
            FieldElement eig;
            if (peek().kind == Tok::ident && peek().text == "res" && is_symbol(":", 1)) {
                next();
                next();
                const bool neg = accept("-");
                long num = integer();
                long den = 1;
                if (accept("/")) {
                    den = integer();
                    if (den == 0) {
                        fail("zero denominator in a residue", eig_at);
                    }
                }
                const Rational r = make_rational(neg ? -num : num, den);
                eig = FieldElement::zeta(r.get_den().get_si(), r.get_num().get_si());
            } else {
                const bool saved = series_context_;
                series_context_ = false;
                eig = as_scalar(expr(), eig_at);
                series_context_ = saved;
            }
            if (eig.is_zero()) {
                fail("eigenvalue must be nonzero", eig_at);
            }
            expect(":");
            const Token size_at = peek();
            const long size = integer();
            if (size < 1) {
                fail("Jordan block size must be positive", size_at);
            }
            expect(")");
            blocks.push_back({eig, size});
        } while (accept(","));
        expect("]");
        return RegularPart(std::move(blocks));
    }

    // ---------------------------------------------------------------- expressions

    static FieldElement as_scalar(const Value& v, const Token& at) {
        if (!v.is_scalar()) {
            fail("expected a scalar", at);
        }
        return v.scalar();
    }

    Value expr() {
        Value out = product();
        while (is_symbol("+") || is_symbol("-")) {
            const bool minus = next().text == "-";
            Value rhs = product();
            if (minus) {
                rhs.num = -rhs.num;
            }
            out = add(out, rhs);
        }
        return out;
    }

    Value product() {
        Value out = unary();
        while (is_symbol("*") || is_symbol("/")) {
            const Token op = next();
            const Value rhs = unary();
            out = op.text == "*" ? multiply(out, rhs) : divide(out, rhs, op);
        }
        return out;
    }

    Value unary() {
        if (accept("-")) {
            Value v = unary();
            v.num = -v.num;
            return v;
        }
        accept("+");
        return power();
    }

    Value power() {
        const Token at = peek();
        Value base = atom();
        if (!accept("^")) {
            return base;
        }
        if (is_symbol("(")) {
            fail("exponent must be an integer literal", peek());
        }
        const long e = signed_integer();
        base = normalized(base);
        if (!base.is_plain()) {
            fail("powers of quotients are not supported", at);
        }
        if (base.num.is_monomial()) {
            const auto& [k, c] = *base.num.terms().begin();
            return {LaurentSeries::monomial(c.pow(e), k * e, base.num.var())};
        }
        if (base.num.terms().empty()) {
            if (e < 0) {
                fail("zero raised to a negative power", at);
            }
            return base;
        }
        if (e < 0) {
            fail("negative powers are only allowed on monomials", at);
        }
        LaurentSeries out = LaurentSeries::constant(FieldElement(1), base.num.var());
        for (long k = 0; k < e; ++k) {
            out = out * base.num;
        }
        return {out};
    }

    std::string variable(const Token& t) {
        if (!series_context_) {
            fail("unexpected identifier '" + t.text + "' in a scalar", t);
        }
        if (var_ && *var_ != t.text) {
            fail("series variable '" + t.text + "' differs from '" + *var_ + "'", t);
        }
        var_ = t.text;
        return t.text;
    }

    Value atom() {
        const Token t = next();
        if (t.kind == Tok::integer) {
            if (t.text.size() > 18) {
                return {LaurentSeries::constant(FieldElement(Rational(mpz_class(t.text))))};
            }
            return {LaurentSeries::constant(FieldElement(std::stol(t.text)))};
        }
        if (t.kind == Tok::symbol && t.text == "(") {
            Value v = expr();
            expect(")");
            return v;
        }
        if (t.kind != Tok::ident) {
            fail("expected a number, variable or '(', found " + describe(t), t);
        }
        if (t.text == "i") {
            return {LaurentSeries::constant(FieldElement::imaginary_unit())};
        }
        if (t.text == "zeta") {
            expect("(");
            const Token n_at = peek();
            const long n = integer();
            if (n < 1) {
                fail("zeta order must be positive", n_at);
            }
            expect(")");
            return {LaurentSeries::constant(FieldElement::zeta(n))};
        }
        if (t.text == "root") {
            expect("(");
            const Token g_at = peek();
            const bool saved = series_context_;
            series_context_ = false;
            const FieldElement g = as_scalar(expr(), g_at);
            series_context_ = saved;
            expect(",");
            const Token m_at = peek();
            const long m = integer();
            expect(")");
            if (m < 1) {
                fail("root degree must be positive", m_at);
            }
            try {
                return {LaurentSeries::constant(FieldElement::root(g, m))};
            } catch (const DomainError& e) {
                fail(e.what(), g_at);
            }
        }
        if (t.text == "O" && is_symbol("(")) {
            next();
            const Token v = next();
            if (v.kind != Tok::ident || kReserved.count(v.text)) {
                fail("expected the series variable in O(...)", v);
            }
            const std::string name = variable(v);
            expect("^");
            const long k = signed_integer();
            expect(")");
            return {LaurentSeries({}, k, name)};
        }
        if (kReserved.count(t.text)) {
            fail("unexpected '" + t.text + "'", t);
        }
        return {LaurentSeries::variable(variable(t))};
    }

    static Value add(const Value& a, const Value& b) {
        if (a.den == b.den) {
            return {a.num + b.num, a.den};
        }
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }

    static Value multiply(const Value& a, const Value& b) {
        return normalized({a.num * b.num, a.den * b.den});
    }

    static Value divide(const Value& a, const Value& b, const Token& at) {
        if (b.num.terms().empty()) {
            fail("division by zero", at);
        }
        if (!b.num.exact()) {
            fail("cannot divide by a truncated series", at);
        }
        return normalized({a.num * b.den, a.den * b.num});
    }
};

} // namespace

ParsedDocument parse(std::string_view text) {
    return Parser(text).document();
}

FormalConnection parse_connection(std::string_view text) {
    ParsedDocument doc = parse(text);
    if (doc.statements.size() != 1) {
        throw ParseError("expected exactly one connection, found " + std::to_string(doc.statements.size()), 1, 1);
    }
    return std::move(doc.statements.front().value);
}

FieldElement parse_scalar(std::string_view text) {
    return Parser(text).scalar_only();
}

RegularPart parse_jordan(std::string_view text) {
    return Parser(text).jordan_only();
}

// ---------------------------------------------------------------- printing

nlohmann::json connection_json(const FormalConnection& m) {
    nlohmann::json summands = nlohmann::json::array();
    for (const auto& el : m.summands) {
        nlohmann::json jordan = nlohmann::json::array();
        for (const auto& b : el.reg().blocks()) {
            jordan.push_back({{"eigenvalue", eigenvalue_string(b.eigenvalue)}, {"size", b.size}});
        }
        const Invariants inv = el.invariants();
        summands.push_back({{"rho", el.rho().to_string()},
                            {"phi", el.phi().to_string("u")},
                            {"jordan", jordan},
                            {"p", el.p()},
                            {"q", el.q()},
                            {"r", el.r()},
                            {"slope", rational_string(inv.slope)},
                            {"irr", inv.irregularity},
                            {"rank", inv.rank},
                            {"text", el.to_string()}});
    }
    return {{"summands", summands}, {"total", {{"rank", m.rank()}, {"irr", m.irregularity()}}}};
}

std::string print_canonical(const FormalConnection& m, Format format) {
    if (format == Format::json) {
        return connection_json(m).dump(2);
    }
    return m.to_string();
}

std::string print_document(const ParsedDocument& doc) {
    if (doc.bare && doc.statements.size() == 1) {
        return doc.statements.front().value.to_string() + "\n";
    }
    std::string out;
    for (const auto& st : doc.statements) {
        out += st.name + " = " + st.value.to_string() + ";\n";
    }
    return out;
}

// ---------------------------------------------------------------- JSON input

nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        int line = 1;
        int col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        const auto cut = msg.find(": ", msg.find("parse error"));
        throw ParseError("invalid JSON" + (cut == std::string::npos ? "" : msg.substr(cut)), line, col);
    }
}

namespace {

[[noreturn]] void json_fail(const std::string& path, const std::string& msg) {
    throw ParseError(msg, 1, 1, path);
}

template <class F>
auto embedded(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), path);
    }
}

std::string string_field(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        json_fail(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

std::vector<ElementaryConnection> summands_field(const nlohmann::json& obj, const std::string& key,
                                                 const std::string& path) {
    if (!obj.contains(key)) {
        return {};
    }
    const std::string p = path + "." + key;
    const std::string text = string_field(obj, key, path);
    return embedded(p, [&] { return parse_connection(text).summands; });
}

} // namespace

FormalConnection connection_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("summands") || !doc.at("summands").is_array()) {
        json_fail("$", "expected an object with a 'summands' array");
    }
    FormalConnection out;
    const auto& arr = doc.at("summands");
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = "$.summands[" + std::to_string(k) + "]";
        const auto& s = arr[k];
        if (!s.is_object()) {
            json_fail(p, "expected an object");
        }
        for (const char* key : {"rho", "phi", "jordan"}) {
            if (!s.contains(key)) {
                json_fail(p, std::string("missing field '") + key + "'");
            }
        }
        const std::string rho = string_field(s, "rho", p);
        const std::string phi = string_field(s, "phi", p);
        const auto& jordan = s.at("jordan");
        if (!jordan.is_array()) {
            json_fail(p + ".jordan", "expected an array");
        }
        std::string r = "[";
        for (std::size_t j = 0; j < jordan.size(); ++j) {
            const std::string q = p + ".jordan[" + std::to_string(j) + "]";
            if (!jordan[j].is_object() || !jordan[j].contains("eigenvalue") || !jordan[j].contains("size") ||
                !jordan[j].at("size").is_number_integer()) {
                json_fail(q, "expected {\"eigenvalue\": <scalar>, \"size\": <int>}");
            }
            r += (j ? ", (" : "(") + string_field(jordan[j], "eigenvalue", q) + ":" +
                 std::to_string(jordan[j].at("size").get<long>()) + ")";
        }
        r += "]";
        const std::string text = "El(rho=" + rho + ", phi=" + phi + ", R=" + r + ")";
        const FormalConnection one = embedded(p, [&] { return parse_connection(text); });
        out = out + one;
    }
    return out;
}

ParsedDocument parse_input(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        ParsedDocument doc;
        doc.bare = true;
        doc.statements.push_back({"", connection_from_json(parse_json(text)), {}});
        return doc;
    }
    return parse(text);
}

// ---------------------------------------------------------------- JSON singularity data

std::vector<SingularityDatum> singularity_points(const nlohmann::json& points, const std::string& path,
                                                 const Settings& s) {
    if (!points.is_array()) {
        json_fail(path, "expected an array of points");
    }
    static const std::set<std::string> known{"location", "summands", "psi", "germ", "slope_above", "slope_one",
                                             "slope_below"};
    std::vector<SingularityDatum> out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        const auto& obj = points[k];
        if (!obj.is_object()) {
            json_fail(p, "expected an object");
        }
        for (const auto& [key, v] : obj.items()) {
            if (!known.count(key)) {
                json_fail(p + "." + key, "unknown field");
            }
        }
        if (!obj.contains("location")) {
            json_fail(p, "missing field 'location'");
        }
        const std::string loc = string_field(obj, "location", p);
        SingularityDatum d;
        if (loc == "inf") {
            if (obj.contains("summands") || obj.contains("psi")) {
                json_fail(p, "the point at infinity takes 'germ' or the slope fields");
            }
            if (obj.contains("germ")) {
                if (obj.contains("slope_above") || obj.contains("slope_one") || obj.contains("slope_below")) {
                    json_fail(p, "give either 'germ' or the slope fields, not both");
                }
                d = split_by_slope(FormalConnection(summands_field(obj, "germ", p)), s);
            } else {
                d.slope_above = summands_field(obj, "slope_above", p);
                d.slope_below = summands_field(obj, "slope_below", p);
                if (obj.contains("slope_one")) {
                    const auto& arr = obj.at("slope_one");
                    if (!arr.is_array()) {
                        json_fail(p + ".slope_one", "expected an array");
                    }
                    for (std::size_t j = 0; j < arr.size(); ++j) {
                        const std::string q = p + ".slope_one[" + std::to_string(j) + "]";
                        if (!arr[j].is_object() || !arr[j].contains("c") || !arr[j].contains("residual")) {
                            json_fail(q, "expected {\"c\": ..., \"residual\": ...}");
                        }
                        const std::string c_text = string_field(arr[j], "c", q);
                        const std::string r_text = string_field(arr[j], "residual", q);
                        const FieldElement c = embedded(q + ".c", [&] { return parse_scalar(c_text); });
                        const auto residual = embedded(q + ".residual", [&] { return parse_connection(r_text); });
                        if (residual.summands.size() != 1) {
                            json_fail(q + ".residual", "expected one elementary connection");
                        }
                        d.slope_one.emplace_back(c, residual.summands.front());
                    }
                }
            }
        } else {
            if (obj.contains("germ") || obj.contains("slope_above") || obj.contains("slope_one") ||
                obj.contains("slope_below")) {
                json_fail(p, "finite points take 'summands' and 'psi'");
            }
            d.location = embedded(p + ".location", [&] { return parse_scalar(loc); });
            d.summands = summands_field(obj, "summands", p);
            if (obj.contains("psi")) {
                const std::string text = string_field(obj, "psi", p);
                d.regular = RegularGermData{embedded(p + ".psi", [&] { return parse_jordan(text); })};
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

SingularityDocument parse_singularity_document(std::string_view text, const Settings& s) {
    const nlohmann::json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("points")) {
        json_fail("$", "expected an object with a 'points' array");
    }
    SingularityDocument out;
    if (doc.contains("genus")) {
        if (!doc.at("genus").is_number_integer() || doc.at("genus").get<long>() < 0) {
            json_fail("$.genus", "expected a nonnegative integer");
        }
        out.genus = doc.at("genus").get<long>();
    }
    out.points = singularity_points(doc.at("points"), "$.points", s);
    return out;
}

} // namespace stphase
