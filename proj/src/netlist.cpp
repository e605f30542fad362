#include "rodnet/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace rodnet {

namespace {

struct Token {
    std::string text;
    int line = 1;
    int col = 1;

    SourceSpan span() const {
        return {line, col, col + std::max<int>(1, static_cast<int>(text.size()))};
    }
};

struct SourceLine {
    int number = 1;
    std::vector<Token> tokens;
};

std::vector<SourceLine> tokenize(std::string_view text) {
    std::vector<SourceLine> lines;
    int line_number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        SourceLine out;
        out.number = line_number;
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            }
            out.tokens.push_back({std::string(line.substr(start, i - start)),
                                  line_number, static_cast<int>(start) + 1});
        }
        if (!out.tokens.empty()) {
            lines.push_back(std::move(out));
        }
        if (eol == std::string_view::npos) {
            break;
        }
        pos = eol + 1;
        ++line_number;
    }
    return lines;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) {
        return false;
    }
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') {
        return false;
    }
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-') {
            return false;
        }
    }
    return true;
}

class Parser {
public:
    ParseResult run(std::string_view text) {
        const std::vector<SourceLine> lines = tokenize(text);
        int last_line = 1;
        for (const SourceLine& line : lines) {
            last_line = line.number;
            parse_line(line);
        }
        if (!analysis_seen_) {
            diag({last_line, 1, 2}, "no analysis specified", DiagnosticKind::Syntax);
        }
        resolve_references();

        ParseResult result;
        if (diagnostics_.empty()) {
            // Belt check: every validate_model class is also diagnosed above,
            // so a clean parse must produce a clean model.
            for (const ModelDiagnostic& d : validate_model(model_)) {
                diag({1, 1, 2}, d.location + ": " + d.message, DiagnosticKind::Range);
            }
        }
        std::stable_sort(diagnostics_.begin(), diagnostics_.end(),
                         [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                             if (a.span.line != b.span.line) {
                                 return a.span.line < b.span.line;
                             }
                             return a.span.col_begin < b.span.col_begin;
                         });
        if (diagnostics_.empty()) {
            result.model = std::move(model_);
        }
        result.diagnostics = std::move(diagnostics_);
        return result;
    }

private:
    enum class RefKind { Node, Material, Section };

    struct Reference {
        std::string name;
        SourceSpan span;
        RefKind kind;
    };

    Model model_;
    std::vector<ParseDiagnostic> diagnostics_;
    std::vector<Reference> references_;
    std::vector<SourceSpan> beam_spans_;  // parallel to model_.beams
    bool analysis_seen_ = false;
    SourceSpan analysis_span_{1, 1, 2};
    std::set<std::string> material_names_, section_names_, node_names_, beam_names_;

    void diag(SourceSpan span, std::string message, DiagnosticKind kind) {
        diagnostics_.push_back({span, std::move(message), kind});
    }

    std::optional<double> parse_number(const Token& tok, const std::string& shown) {
        std::string_view s = tok.text;
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
            diag(tok.span(), "expected a number for " + shown + ", got '" + tok.text + "'",
                 DiagnosticKind::Syntax);
            return std::nullopt;
        }
        return value;
    }

    std::optional<long> parse_integer(const Token& tok, const std::string& shown) {
        std::string_view s = tok.text;
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        long value = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            diag(tok.span(), "expected an integer for " + shown + ", got '" + tok.text + "'",
                 DiagnosticKind::Syntax);
            return std::nullopt;
        }
        return value;
    }

    std::optional<std::string> parse_name(const Token& tok, const std::string& shown) {
        if (!is_identifier(tok.text)) {
            diag(tok.span(), "invalid " + shown + " '" + tok.text + "'", DiagnosticKind::Syntax);
            return std::nullopt;
        }
        return tok.text;
    }

    void check_duplicate(std::set<std::string>& names, const std::string& name,
                         const char* kind, SourceSpan span) {
        if (!names.insert(name).second) {
            diag(span, std::string("duplicate ") + kind + " name '" + name + "'",
                 DiagnosticKind::Reference);
        }
    }

    /// Splits "key=value" tokens into a map, diagnosing unknown or repeated
    /// keys. Pairs may appear in any order.
    std::map<std::string, Token> parse_pairs(const std::vector<Token>& tokens,
                                             std::size_t first,
                                             const std::set<std::string>& allowed) {
        std::map<std::string, Token> pairs;
        for (std::size_t i = first; i < tokens.size(); ++i) {
            const Token& tok = tokens[i];
            const std::size_t eq = tok.text.find('=');
            if (eq == std::string::npos || eq == 0) {
                diag(tok.span(), "expected key=value, got '" + tok.text + "'",
                     DiagnosticKind::Syntax);
                continue;
            }
            const std::string key = tok.text.substr(0, eq);
            if (allowed.count(key) == 0) {
                diag(tok.span(), "unknown key '" + key + "'", DiagnosticKind::Syntax);
                continue;
            }
            if (pairs.count(key) != 0) {
                diag(tok.span(), "repeated key '" + key + "'", DiagnosticKind::Syntax);
                continue;
            }
            Token value = tok;
            value.text = tok.text.substr(eq + 1);
            value.col = tok.col + static_cast<int>(eq) + 1;
            if (value.text.empty()) {
                diag(tok.span(), "missing value for '" + key + "'", DiagnosticKind::Syntax);
                continue;
            }
            pairs.emplace(key, std::move(value));
        }
        return pairs;
    }

    const Token* require_key(const std::map<std::string, Token>& pairs, const char* key,
                             SourceSpan line_span) {
        const auto it = pairs.find(key);
        if (it == pairs.end()) {
            diag(line_span, std::string("missing required '") + key + "='",
                 DiagnosticKind::Syntax);
            return nullptr;
        }
        return &it->second;
    }

    void check_positive(double value, const char* what, SourceSpan span) {
        if (!(value > 0.0)) {
            diag(span, std::string(what) + " must be positive", DiagnosticKind::Range);
        }
    }

    void parse_line(const SourceLine& line) {
        const Token& head = line.tokens.front();
        if (head.text == "material") {
            parse_material(line);
        } else if (head.text == "section") {
            parse_section(line);
        } else if (head.text == "node") {
            parse_node(line);
        } else if (head.text == "fix") {
            parse_fix(line);
        } else if (head.text == "beam") {
            parse_beam(line);
        } else if (head.text == "force") {
            parse_force(line);
        } else if (head.text == "analysis") {
            parse_analysis(line);
        } else {
            diag(head.span(), "unknown keyword '" + head.text + "'", DiagnosticKind::Syntax);
        }
    }

    void parse_material(const SourceLine& line) {
        if (line.tokens.size() < 2) {
            diag(line.tokens[0].span(), "material requires a name", DiagnosticKind::Syntax);
            return;
        }
        const auto name = parse_name(line.tokens[1], "material name");
        if (!name) {
            return;
        }
        check_duplicate(material_names_, *name, "material", line.tokens[1].span());
        const auto pairs = parse_pairs(line.tokens, 2, {"E", "rho"});
        Material m;
        m.name = *name;
        if (const Token* t = require_key(pairs, "E", line.tokens[0].span())) {
            if (const auto v = parse_number(*t, "E")) {
                m.E = *v;
                check_positive(*v, "Young's modulus", t->span());
            }
        }
        if (const Token* t = require_key(pairs, "rho", line.tokens[0].span())) {
            if (const auto v = parse_number(*t, "rho")) {
                m.rho = *v;
                check_positive(*v, "density", t->span());
            }
        }
        model_.materials.push_back(std::move(m));
    }

    void parse_section(const SourceLine& line) {
        if (line.tokens.size() < 2) {
            diag(line.tokens[0].span(), "section requires a name", DiagnosticKind::Syntax);
            return;
        }
        const auto name = parse_name(line.tokens[1], "section name");
        if (!name) {
            return;
        }
        check_duplicate(section_names_, *name, "section", line.tokens[1].span());
        Section s;
        s.name = *name;
        const bool rect_form = line.tokens.size() > 2 && line.tokens[2].text == "rect";
        if (rect_form) {
            const auto pairs = parse_pairs(line.tokens, 3, {"w", "t"});
            double w = 0.0, t = 0.0;
            if (const Token* tk = require_key(pairs, "w", line.tokens[0].span())) {
                if (const auto v = parse_number(*tk, "w")) {
                    w = *v;
                    check_positive(w, "width", tk->span());
                }
            }
            if (const Token* tk = require_key(pairs, "t", line.tokens[0].span())) {
                if (const auto v = parse_number(*tk, "t")) {
                    t = *v;
                    check_positive(t, "thickness", tk->span());
                }
            }
            if (w > 0.0 && t > 0.0) {
                s = rect_section(*name, w, t);
            }
        } else {
            const auto pairs = parse_pairs(line.tokens, 2, {"A", "I"});
            if (const Token* tk = require_key(pairs, "A", line.tokens[0].span())) {
                if (const auto v = parse_number(*tk, "A")) {
                    s.A = *v;
                    check_positive(s.A, "area", tk->span());
                }
            }
            if (const Token* tk = require_key(pairs, "I", line.tokens[0].span())) {
                if (const auto v = parse_number(*tk, "I")) {
                    s.I = *v;
                    check_positive(s.I, "second moment of area", tk->span());
                }
            }
        }
        model_.sections.push_back(std::move(s));
    }

    void parse_node(const SourceLine& line) {
        if (line.tokens.size() != 4) {
            diag(line.tokens[0].span(), "node requires: node <name> <x> <y>",
                 DiagnosticKind::Syntax);
            if (line.tokens.size() < 4) {
                return;
            }
        }
        const auto name = parse_name(line.tokens[1], "node name");
        if (!name) {
            return;
        }
        check_duplicate(node_names_, *name, "node", line.tokens[1].span());
        Node n;
        n.name = *name;
        if (const auto x = parse_number(line.tokens[2], "x")) {
            n.x = *x;
        }
        if (const auto y = parse_number(line.tokens[3], "y")) {
            n.y = *y;
        }
        model_.nodes.push_back(std::move(n));
    }

    void parse_fix(const SourceLine& line) {
        if (line.tokens.size() < 2) {
            diag(line.tokens[0].span(), "fix requires a node name", DiagnosticKind::Syntax);
            return;
        }
        const auto name = parse_name(line.tokens[1], "node name");
        if (!name) {
            return;
        }
        references_.push_back({*name, line.tokens[1].span(), RefKind::Node});
        Constraint c;
        c.node = *name;
        if (line.tokens.size() == 2) {
            c.fixed = {true, true, true};
        } else {
            for (std::size_t i = 2; i < line.tokens.size(); ++i) {
                const std::string& dof = line.tokens[i].text;
                if (dof == "ux") {
                    c.fixed[0] = true;
                } else if (dof == "uy") {
                    c.fixed[1] = true;
                } else if (dof == "rz") {
                    c.fixed[2] = true;
                } else {
                    diag(line.tokens[i].span(), "unknown dof '" + dof + "' (expected ux, uy, rz)",
                         DiagnosticKind::Syntax);
                }
            }
        }
        model_.constraints.push_back(std::move(c));
    }

    void parse_beam(const SourceLine& line) {
        if (line.tokens.size() < 4) {
            diag(line.tokens[0].span(),
                 "beam requires: beam <name> <nodeA> <nodeB> mat=<m> sec=<s> [n=<k>]",
                 DiagnosticKind::Syntax);
            return;
        }
        const auto name = parse_name(line.tokens[1], "beam name");
        if (!name) {
            return;
        }
        check_duplicate(beam_names_, *name, "beam", line.tokens[1].span());
        Beam b;
        b.name = *name;
        if (const auto a = parse_name(line.tokens[2], "node name")) {
            b.node_a = *a;
            references_.push_back({*a, line.tokens[2].span(), RefKind::Node});
        }
        if (const auto c = parse_name(line.tokens[3], "node name")) {
            b.node_b = *c;
            references_.push_back({*c, line.tokens[3].span(), RefKind::Node});
        }
        const auto pairs = parse_pairs(line.tokens, 4, {"mat", "sec", "n"});
        if (const Token* t = require_key(pairs, "mat", line.tokens[0].span())) {
            if (const auto m = parse_name(*t, "material name")) {
                b.material = *m;
                references_.push_back({*m, t->span(), RefKind::Material});
            }
        }
        if (const Token* t = require_key(pairs, "sec", line.tokens[0].span())) {
            if (const auto s = parse_name(*t, "section name")) {
                b.section = *s;
                references_.push_back({*s, t->span(), RefKind::Section});
            }
        }
        if (const auto it = pairs.find("n"); it != pairs.end()) {
            if (const auto n = parse_integer(it->second, "n")) {
                b.subdivisions = static_cast<int>(*n);
                if (*n < 1) {
                    diag(it->second.span(), "subdivisions must be at least 1",
                         DiagnosticKind::Range);
                }
            }
        }
        model_.beams.push_back(std::move(b));
        beam_spans_.push_back(line.tokens[0].span());
    }

    void parse_force(const SourceLine& line) {
        if (line.tokens.size() < 2) {
            diag(line.tokens[0].span(), "force requires a node name", DiagnosticKind::Syntax);
            return;
        }
        const auto name = parse_name(line.tokens[1], "node name");
        if (!name) {
            return;
        }
        references_.push_back({*name, line.tokens[1].span(), RefKind::Node});
        Load l;
        l.node = *name;
        const auto pairs = parse_pairs(line.tokens, 2, {"fx", "fy", "mz"});
        if (const auto it = pairs.find("fx"); it != pairs.end()) {
            if (const auto v = parse_number(it->second, "fx")) {
                l.fx = *v;
            }
        }
        if (const auto it = pairs.find("fy"); it != pairs.end()) {
            if (const auto v = parse_number(it->second, "fy")) {
                l.fy = *v;
            }
        }
        if (const auto it = pairs.find("mz"); it != pairs.end()) {
            if (const auto v = parse_number(it->second, "mz")) {
                l.mz = *v;
            }
        }
        model_.loads.push_back(std::move(l));
    }

    void parse_analysis(const SourceLine& line) {
        if (analysis_seen_) {
            diag(line.tokens[0].span(), "duplicate analysis line", DiagnosticKind::Syntax);
            return;
        }
        analysis_seen_ = true;
        analysis_span_ = line.tokens[0].span();
        if (line.tokens.size() < 2) {
            diag(line.tokens[0].span(),
                 "analysis requires a kind (static, buckling, modal, nonlinear)",
                 DiagnosticKind::Syntax);
            return;
        }
        const std::string& kind = line.tokens[1].text;
        AnalysisSpec& spec = model_.analysis;
        if (kind == "static") {
            spec.kind = AnalysisKind::LinearStatic;
        } else if (kind == "buckling") {
            spec.kind = AnalysisKind::Buckling;
        } else if (kind == "modal") {
            spec.kind = AnalysisKind::Modal;
            const auto pairs = parse_pairs(line.tokens, 2, {"n", "order"});
            if (const auto it = pairs.find("n"); it != pairs.end()) {
                if (const auto v = parse_integer(it->second, "n")) {
                    spec.modal_modes = static_cast<int>(*v);
                    if (*v < 1) {
                        diag(it->second.span(), "mode count must be at least 1",
                             DiagnosticKind::Range);
                    }
                }
            }
            if (const auto it = pairs.find("order"); it != pairs.end()) {
                if (const auto v = parse_integer(it->second, "order")) {
                    spec.modal_order = static_cast<int>(*v);
                    if (*v < 0) {
                        diag(it->second.span(), "truncation order must be non-negative",
                             DiagnosticKind::Range);
                    }
                }
            }
        } else if (kind == "nonlinear") {
            spec.kind = AnalysisKind::NonlinearStatic;
            const auto pairs = parse_pairs(line.tokens, 2, {"steps", "tol", "maxiter"});
            if (const auto it = pairs.find("steps"); it != pairs.end()) {
                if (const auto v = parse_integer(it->second, "steps")) {
                    spec.nonlinear_steps = static_cast<int>(*v);
                    if (*v < 1) {
                        diag(it->second.span(), "steps must be at least 1",
                             DiagnosticKind::Range);
                    }
                }
            }
            if (const auto it = pairs.find("tol"); it != pairs.end()) {
                if (const auto v = parse_number(it->second, "tol")) {
                    spec.nonlinear_tolerance = *v;
                    if (!(*v > 0.0)) {
                        diag(it->second.span(), "tolerance must be positive",
                             DiagnosticKind::Range);
                    }
                }
            }
            if (const auto it = pairs.find("maxiter"); it != pairs.end()) {
                if (const auto v = parse_integer(it->second, "maxiter")) {
                    spec.nonlinear_max_iterations = static_cast<int>(*v);
                    if (*v < 1) {
                        diag(it->second.span(), "maxiter must be at least 1",
                             DiagnosticKind::Range);
                    }
                }
            }
        } else {
            diag(line.tokens[1].span(), "unknown analysis kind '" + kind + "'",
                 DiagnosticKind::Syntax);
        }
    }

    void resolve_references() {
        for (const Reference& ref : references_) {
            bool found = false;
            switch (ref.kind) {
                case RefKind::Node: found = node_names_.count(ref.name) != 0; break;
                case RefKind::Material: found = material_names_.count(ref.name) != 0; break;
                case RefKind::Section: found = section_names_.count(ref.name) != 0; break;
            }
            if (!found) {
                const char* kind = ref.kind == RefKind::Node ? "node"
                                   : ref.kind == RefKind::Material ? "material"
                                                                   : "section";
                diag(ref.span, std::string("undefined ") + kind + " '" + ref.name + "'",
                     DiagnosticKind::Reference);
            }
        }
        // Geometry checks need resolved endpoints.
        for (std::size_t i = 0; i < model_.beams.size(); ++i) {
            const Beam& b = model_.beams[i];
            const Node* a = model_.find_node(b.node_a);
            const Node* c = model_.find_node(b.node_b);
            if (a == nullptr || c == nullptr) {
                continue;
            }
            if (b.node_a == b.node_b || std::hypot(c->x - a->x, c->y - a->y) <= 0.0) {
                diag(beam_spans_[i], "beam " + b.name + ": zero-length beam",
                     DiagnosticKind::Range);
            }
        }
        const bool needs_support = analysis_seen_ &&
                                   (model_.analysis.kind == AnalysisKind::LinearStatic ||
                                    model_.analysis.kind == AnalysisKind::Buckling ||
                                    model_.analysis.kind == AnalysisKind::Modal);
        if (needs_support && model_.constraints.empty()) {
            diag(analysis_span_, "analysis requires at least one fix line",
                 DiagnosticKind::Range);
        }
    }
};

int append_double(std::string& out, double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
    return 0;
}

void append_int(std::string& out, long value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
}

bool nonzero(double v) {
    return v != 0.0 || std::signbit(v);
}

} // namespace

ParseResult parse_model(std::string_view text) {
    return Parser().run(text);
}

std::string serialize_model(const Model& model) {
    std::string out;
    for (const Material& m : model.materials) {
        out += "material " + m.name + " E=";
        append_double(out, m.E);
        out += " rho=";
        append_double(out, m.rho);
        out += "\n";
    }
    for (const Section& s : model.sections) {
        out += "section " + s.name;
        if (s.rect) {
            out += " rect w=";
            append_double(out, s.rect->w);
            out += " t=";
            append_double(out, s.rect->t);
        } else {
            out += " A=";
            append_double(out, s.A);
            out += " I=";
            append_double(out, s.I);
        }
        out += "\n";
    }
    for (const Node& n : model.nodes) {
        out += "node " + n.name + " ";
        append_double(out, n.x);
        out += " ";
        append_double(out, n.y);
        out += "\n";
    }
    for (const Constraint& c : model.constraints) {
        out += "fix " + c.node;
        if (c.fixed[0]) {
            out += " ux";
        }
        if (c.fixed[1]) {
            out += " uy";
        }
        if (c.fixed[2]) {
            out += " rz";
        }
        out += "\n";
    }
    for (const Beam& b : model.beams) {
        out += "beam " + b.name + " " + b.node_a + " " + b.node_b + " mat=" + b.material +
               " sec=" + b.section + " n=";
        append_int(out, b.subdivisions);
        out += "\n";
    }
    for (const Load& l : model.loads) {
        out += "force " + l.node;
        if (nonzero(l.fx)) {
            out += " fx=";
            append_double(out, l.fx);
        }
        if (nonzero(l.fy)) {
            out += " fy=";
            append_double(out, l.fy);
        }
        if (nonzero(l.mz)) {
            out += " mz=";
            append_double(out, l.mz);
        }
        out += "\n";
    }
    out += "analysis ";
    switch (model.analysis.kind) {
        case AnalysisKind::LinearStatic:
            out += "static";
            break;
        case AnalysisKind::Buckling:
            out += "buckling";
            break;
        case AnalysisKind::Modal:
            out += "modal n=";
            append_int(out, model.analysis.modal_modes);
            out += " order=";
            append_int(out, model.analysis.modal_order);
            break;
        case AnalysisKind::NonlinearStatic:
            out += "nonlinear steps=";
            append_int(out, model.analysis.nonlinear_steps);
            out += " tol=";
            append_double(out, model.analysis.nonlinear_tolerance);
            out += " maxiter=";
            append_int(out, model.analysis.nonlinear_max_iterations);
            break;
    }
    out += "\n";
    return out;
}

} // namespace rodnet
