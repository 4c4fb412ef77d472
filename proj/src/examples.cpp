#include "obstructa/examples.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "obstructa/errors.hpp"
#include "obstructa/hochschild.hpp"

namespace obstructa {

using nlohmann::json;

namespace {

void add_unital_m2(AlgebraSpec& a, int b0) {
    OpTable m2;
    const int u = a.unit_index();
    for (int16_t x = 0; x < (int16_t)a.basis.size(); ++x) {
        m2[{(int16_t)u, x}] = QOut{{x, 1}};
        m2[{x, (int16_t)u}] = QOut{{x, a.basis[x].degree % 2 == 0 ? Rat(1) : Rat(-1)}};
    }
    a.ops[{2, b0}] = m2;
}

}  // namespace

std::vector<std::string> example_names() {
    return {"E-zero", "E-free", "E1", "E2", "E3", "E4"};
}

AlgebraSpec build_example(const std::string& name) {
    AlgebraSpec a;
    a.name = name;
    if (name == "E-zero") {
        a.basis = {{"z0", 0, false}, {"z1", 1, false}, {"z2", 3, false}};
        a.classes = {{"b0", 0, 0}};
        return a;
    }
    if (name == "E-free") {
        // unital DGA, differential a -> c, products of non-units vanish;
        // cohomology is spanned by the unit
        a.basis = {{"I", 0, true}, {"a", 1, false}, {"c", 2, false}};
        a.classes = {{"b0", 0, 0}};
        OpTable m1;
        m1[{1}] = QOut{{2, 1}};
        a.ops[{1, 0}] = m1;
        add_unital_m2(a, 0);
        return a;
    }
    if (name == "E1") {
        a.basis = {{"I", 0, true}, {"p", 1, false}, {"q", 2, false}};
        a.classes = {{"b0", 0, 0}};
        OpTable m1;
        m1[{1}] = QOut{{2, 1}};
        a.ops[{1, 0}] = m1;
        add_unital_m2(a, 0);
        return a;
    }
    if (name == "E2") {
        // single positive class, m0(1) = T v with v a non-exact m1-bar cycle
        a.basis = {{"I", 0, true}, {"v", 2, false}};
        a.classes = {{"b0", 0, 0}, {"b1", 1, 0}};
        OpTable m0;
        m0[{}] = QOut{{1, 1}};
        a.ops[{0, 1}] = m0;
        add_unital_m2(a, 0);
        return a;
    }
    if (name == "E3") {
        // m0(1) = T m1(u); m2(u,u) = w forces a second-order correction of
        // the bounding cochain; z spans ker(m1) in degree 1
        a.basis = {{"I", 0, true}, {"u", 1, false}, {"z", 1, false}, {"w", 2, false}};
        a.classes = {{"b0", 0, 0}, {"b1", 1, 0}};
        OpTable m1;
        m1[{1}] = QOut{{3, 1}};
        a.ops[{1, 0}] = m1;
        add_unital_m2(a, 0);
        a.ops[{2, 0}][{1, 1}] = QOut{{3, 1}};
        OpTable m0;
        m0[{}] = QOut{{3, 1}};
        a.ops[{0, 1}] = m0;
        return a;
    }
    if (name == "E4") {
        // all Maslov indices <= 0; m0(1) = T e^{-1} theta
        a.basis = {{"L", 0, true}, {"th", 4, false}};
        a.classes = {{"b0", 0, 0}, {"b1", 1, -2}};
        OpTable m0;
        m0[{}] = QOut{{1, 1}};
        a.ops[{0, 1}] = m0;
        add_unital_m2(a, 0);
        return a;
    }
    throw DomainError("unknown example '" + name + "'");
}

SignedVector solve_bounding_cochain(const AlgebraSpec& a, const Window& win) {
    const Rat l0 = a.energy_gcd();
    if (l0 == 0) {
        // strict algebra: b = 0 works iff m0 = 0
        SignedVector b(Flavor::Plain, win.emax);
        if (!a.m0(win.emax).is_zero())
            throw DomainError("no energy grid to solve the bounding cochain on");
        return b;
    }
    // m1-bar on the degree-1 part, as a Q-matrix over the basis
    ColMat m1;
    m1.resize((int)a.basis.size(), (int)a.basis.size());
    const int b0 = a.beta0_index();
    if (b0 >= 0) {
        auto it = a.ops.find({1, b0});
        if (it != a.ops.end())
            for (const auto& [in, out] : it->second)
                for (const auto& [letter, c] : out) m1.cols[in[0]][letter] = c;
    }
    Window exact = win;
    exact.lmax = 1 << 20;

    SignedVector b(Flavor::Plain, win.emax);
    int guard = 0;
    while (true) {
        SignedVector eb = exp_b(b, win);
        SignedVector img = dhat_apply(a, eb, exact);
        SignedVector r1(Flavor::Plain, win.emax);
        for (const auto& [w, s] : img.coef())
            if (w.size() == 1) r1.add(w, s);
        if (r1.is_zero()) {
            if (!img.is_zero())
                throw DomainError("residual vanishes in length 1 but not overall");
            return b;
        }
        Valuation v = r1.valuation();
        Rat level = *v.value;
        // every (level, eexp) slot of the lowest level gets its own solve
        std::map<long, QVec> slots;
        for (const auto& [w, s] : r1.coef())
            for (const auto& t : s.terms())
                if (t.energy == level) slots[t.eexp][w.letters[0]] += t.coeff;
        for (const auto& [ee, target] : slots) {
            QVec neg;
            for (const auto& [i, c] : target) neg[i] = -c;
            auto sol = solve(m1, neg);
            if (!sol)
                throw DomainError("Maurer-Cartan equation obstructed at level T^" +
                                  to_string(level));
            for (const auto& [i, c] : *sol) {
                if (a.basis[i].degree % 2 == 0)
                    throw DomainError("bounding cochain requires odd degree at level T^" +
                                      to_string(level));
                b.add(plain_word({(int16_t)i}),
                      NovikovScalar::monomial(c, level, ee, win.emax));
            }
        }
        if (++guard > 64)
            throw DomainError("bounding cochain solver did not terminate");
    }
}

SignedVector e3_second_cochain(const AlgebraSpec& e3, const Window& win) {
    SignedVector b = solve_bounding_cochain(e3, win);
    int zi = e3.index_of("z");
    if (zi < 0) throw DomainError("second cochain expects the E3 basis");
    SignedVector b2 = b;
    b2.add(plain_word({(int16_t)zi}), NovikovScalar::monomial(1, 1, 0, win.emax));
    if (!mc_defect(e3, b2, win).is_zero())
        throw DomainError("kernel-shifted cochain fails the Maurer-Cartan equation");
    return b2;
}

// ---- JSON serialization ----

namespace {

json rat_to_json(const Rat& r) {
    if (is_integer(r) && r.get_num().fits_slong_p()) return (long)r.get_num().get_si();
    return to_string(r);
}

Rat rat_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat((long)j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw ParseError("expected rational (integer or \"p/q\") at " + where, 0, 0);
}

json basis_to_json(const std::vector<BasisElement>& basis) {
    json arr = json::array();
    for (const auto& e : basis) {
        json b{{"id", e.id}, {"degree", e.degree}};
        if (e.is_unit) b["unit"] = true;
        arr.push_back(b);
    }
    return arr;
}

std::vector<BasisElement> basis_from_json(const json& arr, const std::string& where) {
    std::vector<BasisElement> out;
    for (const auto& b : arr) {
        BasisElement e;
        e.id = b.at("id").get<std::string>();
        if (!b.at("degree").is_number_integer())
            throw ParseError("malformed degree field for basis element '" + e.id + "' in " +
                                 where,
                             0, 0);
        e.degree = b.at("degree").get<int>();
        e.is_unit = b.value("unit", false);
        out.push_back(e);
    }
    return out;
}

json classes_to_json(const std::vector<ClassInfo>& classes) {
    json arr = json::array();
    for (const auto& c : classes)
        arr.push_back({{"label", c.label}, {"energy", rat_to_json(c.energy)},
                       {"maslov", c.maslov}});
    return arr;
}

std::vector<ClassInfo> classes_from_json(const json& arr) {
    std::vector<ClassInfo> out;
    for (const auto& c : arr) {
        ClassInfo ci;
        ci.label = c.at("label").get<std::string>();
        ci.energy = rat_from_json(c.at("energy"), "class '" + ci.label + "'");
        ci.maslov = c.at("maslov").get<long>();
        out.push_back(ci);
    }
    return out;
}

int class_index(const std::vector<ClassInfo>& classes, const std::string& label) {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].label == label) return (int)i;
    throw ParseError("unknown class label '" + label + "'", 0, 0);
}

int basis_index(const std::vector<BasisElement>& basis, const std::string& id) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].id == id) return (int)i;
    throw ParseError("unknown basis id '" + id + "'", 0, 0);
}

json ops_to_json(const std::map<std::pair<int, int>, OpTable>& ops,
                 const std::vector<BasisElement>& basis,
                 const std::vector<ClassInfo>& classes) {
    json arr = json::array();
    for (const auto& [key, tab] : ops) {
        auto [k, ci] = key;
        json terms = json::array();
        for (const auto& [in, out] : tab) {
            json jin = json::array();
            for (int16_t l : in) jin.push_back(basis[l].id);
            json jout = json::array();
            for (const auto& [l, c] : out)
                jout.push_back({{"id", basis[l].id}, {"coeff", rat_to_json(c)}});
            terms.push_back({{"in", jin}, {"out", jout}});
        }
        arr.push_back({{"arity", k}, {"class", classes[ci].label}, {"terms", terms}});
    }
    return arr;
}

std::map<std::pair<int, int>, OpTable> ops_from_json(const json& arr,
                                                     const std::vector<BasisElement>& basis,
                                                     const std::vector<ClassInfo>& classes) {
    std::map<std::pair<int, int>, OpTable> ops;
    for (const auto& op : arr) {
        int k = op.at("arity").get<int>();
        int ci = class_index(classes, op.at("class").get<std::string>());
        OpTable& tab = ops[{k, ci}];
        for (const auto& term : op.at("terms")) {
            std::vector<int16_t> in;
            for (const auto& id : term.at("in"))
                in.push_back((int16_t)basis_index(basis, id.get<std::string>()));
            if ((int)in.size() != k)
                throw ParseError("arity mismatch in operation table", 0, 0);
            QOut out;
            for (const auto& o : term.at("out"))
                out.push_back({(int16_t)basis_index(basis, o.at("id").get<std::string>()),
                               rat_from_json(o.at("coeff"), "output coefficient")});
            tab[in] = out;
        }
    }
    return ops;
}

json algebra_to_json(const AlgebraSpec& a) {
    json j;
    j["name"] = a.name;
    j["basis"] = basis_to_json(a.basis);
    j["classes"] = classes_to_json(a.classes);
    j["ops"] = ops_to_json(a.ops, a.basis, a.classes);
    if (a.z2_mode) j["mode"] = "z2";
    return j;
}

AlgebraSpec algebra_from_json(const json& j) {
    AlgebraSpec a;
    a.name = j.value("name", "unnamed");
    a.basis = basis_from_json(j.at("basis"), "algebra '" + a.name + "'");
    a.classes = classes_from_json(j.at("classes"));
    if (j.contains("ops")) a.ops = ops_from_json(j.at("ops"), a.basis, a.classes);
    a.z2_mode = j.value("mode", "z") == std::string("z2");
    return a;
}

}  // namespace

std::string save_algebra(const AlgebraSpec& a) { return algebra_to_json(a).dump(2) + "\n"; }

AlgebraSpec load_algebra(const std::string& text) {
    json j = json::parse(text);
    return algebra_from_json(j);
}

std::string save_bimodule(const BimoduleSpec& m) {
    json j;
    j["name"] = m.name;
    j["left"] = algebra_to_json(m.left);
    j["right"] = algebra_to_json(m.right);
    j["module_basis"] = basis_to_json(m.module_basis);
    j["classes"] = classes_to_json(m.classes);
    json arr = json::array();
    for (const auto& [key, tab] : m.nops) {
        auto [k1, k0, ci] = key;
        json terms = json::array();
        for (const auto& [in, out] : tab) {
            json jleft = json::array(), jright = json::array();
            for (int i = 0; i < k1; ++i) jleft.push_back(m.left.basis[in.letters[i]].id);
            for (int i = k1 + 1; i < (int)in.size(); ++i)
                jright.push_back(m.right.basis[in.letters[i]].id);
            json jout = json::array();
            for (const auto& [l, c] : out)
                jout.push_back({{"id", m.module_basis[l].id}, {"coeff", rat_to_json(c)}});
            terms.push_back({{"left", jleft},
                             {"v", m.module_basis[in.letters[k1]].id},
                             {"right", jright},
                             {"out", jout}});
        }
        arr.push_back(
            {{"k1", k1}, {"k0", k0}, {"class", m.classes[ci].label}, {"terms", terms}});
    }
    j["n_ops"] = arr;
    return j.dump(2) + "\n";
}

BimoduleSpec load_bimodule(const std::string& text) {
    json j = json::parse(text);
    BimoduleSpec m;
    m.name = j.value("name", "unnamed");
    m.left = algebra_from_json(j.at("left"));
    m.right = algebra_from_json(j.at("right"));
    m.module_basis = basis_from_json(j.at("module_basis"), "module basis");
    m.classes = classes_from_json(j.at("classes"));
    for (const auto& op : j.value("n_ops", json::array())) {
        int k1 = op.at("k1").get<int>();
        int k0 = op.at("k0").get<int>();
        int ci = class_index(m.classes, op.at("class").get<std::string>());
        NTable& tab = m.nops[{k1, k0, ci}];
        for (const auto& term : op.at("terms")) {
            Word in;
            for (const auto& id : term.at("left"))
                in.letters.push_back(
                    (int16_t)basis_index(m.left.basis, id.get<std::string>()));
            in.mark = (int16_t)in.letters.size();
            in.letters.push_back(
                (int16_t)basis_index(m.module_basis, term.at("v").get<std::string>()));
            for (const auto& id : term.at("right"))
                in.letters.push_back(
                    (int16_t)basis_index(m.right.basis, id.get<std::string>()));
            if ((int)in.size() != k1 + k0 + 1)
                throw ParseError("n_ops term shape mismatch", 0, 0);
            QOut out;
            for (const auto& o : term.at("out"))
                out.push_back(
                    {(int16_t)basis_index(m.module_basis, o.at("id").get<std::string>()),
                     rat_from_json(o.at("coeff"), "n_ops output")});
            tab[in] = out;
        }
    }
    return m;
}

std::string save_homomorphism(const HomomorphismSpec& f) {
    json j;
    j["name"] = f.name;
    j["source"] = algebra_to_json(f.source);
    j["target"] = algebra_to_json(f.target);
    j["classes"] = classes_to_json(f.classes);
    json arr = json::array();
    for (const auto& [key, tab] : f.fops) {
        auto [k, ci] = key;
        json terms = json::array();
        for (const auto& [in, out] : tab) {
            json jin = json::array();
            for (int16_t l : in) jin.push_back(f.source.basis[l].id);
            json jout = json::array();
            for (const auto& [l, c] : out)
                jout.push_back({{"id", f.target.basis[l].id}, {"coeff", rat_to_json(c)}});
            terms.push_back({{"in", jin}, {"out", jout}});
        }
        arr.push_back({{"arity", k}, {"class", f.classes[ci].label}, {"terms", terms}});
    }
    j["f_ops"] = arr;
    return j.dump(2) + "\n";
}

HomomorphismSpec load_homomorphism(const std::string& text) {
    json j = json::parse(text);
    HomomorphismSpec f;
    f.name = j.value("name", "unnamed");
    f.source = algebra_from_json(j.at("source"));
    f.target = algebra_from_json(j.at("target"));
    f.classes = classes_from_json(j.at("classes"));
    for (const auto& op : j.value("f_ops", json::array())) {
        int k = op.at("arity").get<int>();
        int ci = class_index(f.classes, op.at("class").get<std::string>());
        OpTable& tab = f.fops[{k, ci}];
        for (const auto& term : op.at("terms")) {
            std::vector<int16_t> in;
            for (const auto& id : term.at("in"))
                in.push_back((int16_t)basis_index(f.source.basis, id.get<std::string>()));
            QOut out;
            for (const auto& o : term.at("out"))
                out.push_back(
                    {(int16_t)basis_index(f.target.basis, o.at("id").get<std::string>()),
                     rat_from_json(o.at("coeff"), "f_ops output")});
            tab[in] = out;
        }
    }
    return f;
}

LoadedSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line/column
        int line = 1, col = 1;
        for (std::size_t i = 0; i < std::min(text.size(), (std::size_t)e.byte); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(std::string("JSON parse error: ") + e.what(), line, col);
    }
    LoadedSpec out;
    try {
        if (j.contains("n_ops") || j.contains("module_basis"))
            out.bimodule = load_bimodule(text);
        else if (j.contains("f_ops") || j.contains("source"))
            out.homomorphism = load_homomorphism(text);
        else
            out.algebra = load_algebra(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("spec schema error: ") + e.what(), 0, 0);
    }
    return out;
}

}  // namespace obstructa
