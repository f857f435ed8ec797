#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "arbor/acceptance.hpp"
#include "arbor/catalog.hpp"
#include "arbor/conjugacy.hpp"
#include "arbor/dynamics.hpp"
#include "arbor/level_groups.hpp"
#include "arbor/portrait.hpp"
#include "arbor/recursion.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace arbor;

namespace {

struct Flags {
    std::string case_text;
    int level = 4;
    std::string poly;
    std::string field = "Q";
    std::uint64_t q = 0;
    std::int64_t k = 0;
    std::uint64_t cap = std::uint64_t{1} << 25;
    std::uint64_t seed = 1;
    std::string suite = "all";
    bool json = false;
    int threads = 1;
    std::string system;
    std::string word;
    std::string lhs, rhs, element;
    std::string out;
    int max_steps = 64;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GroupCase need_case(const Flags& f) {
    if (f.case_text.empty()) throw UsageError("--case is required");
    return GroupCase::parse(f.case_text);
}

FieldSpec field_of(const Flags& f) {
    return FieldSpec::parse(f.field, f.q ? std::optional<std::uint64_t>(f.q) : std::nullopt);
}

OrbitClass orbit_of(const Flags& f) {
    if (f.poly.empty()) throw UsageError("--poly is required");
    return critical_orbit(f.poly, field_of(f), f.max_steps);
}

EnumerateOptions enum_opts(const Flags& f) {
    EnumerateOptions o;
    o.cap = f.cap;
    o.threads = f.threads;
    return o;
}

json table_summary(const GroupTable& t) {
    json j;
    j["level"] = t.level();
    auto l = t.order_log2();
    j["log2_order"] = l ? json(*l) : json(nullptr);
    j["truncated"] = t.truncated();
    j["generator_count"] = t.generators().size();
    j["elements_found"] = t.size();
    return j;
}

std::string rat_str(const boost::rational<std::int64_t>& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

void emit(const Flags& f, const json& j, const std::string& text) {
    if (f.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_classify(const Flags& f) {
    OrbitClass o = orbit_of(f);
    json j;
    j["class"] = o.kind_name();
    j["s"] = o.s;
    j["r"] = o.r;
    if (o.kind == OrbitKind::InfiniteCertified) j["escape_index"] = o.escape_index;
    j["steps"] = o.steps;
    j["field"] = field_of(f).str();
    j["orbit"] = o.orbit;
    std::ostringstream t;
    t << "class " << o.kind_name() << "\ns " << o.s << "\nr " << o.r << "\n";
    if (o.kind == OrbitKind::InfiniteCertified) t << "escape_index " << o.escape_index << "\n";
    t << "steps " << o.steps << "\n";
    if (auto c = o.group_case()) t << "case " << c->str() << "\n";
    emit(f, j, t.str());
    return 0;
}

int cmd_gens(const Flags& f) {
    GroupCase c = need_case(f);
    Catalog cat = c.catalog();
    json j = json::array();
    std::ostringstream t;
    auto ps = cat.generator_portraits(f.level);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string& name = cat.system.name(cat.generators[i]);
        j.push_back({{"name", name}, {"portrait", encode(ps[i])}, {"order_log2", order_log2(ps[i])}});
        t << name << " " << encode(ps[i]) << "\n";
    }
    emit(f, j, t.str());
    return 0;
}

int cmd_eval(const Flags& f) {
    RecursionSystem sys;
    if (!f.system.empty()) {
        std::ifstream in(f.system);
        if (!in) throw UsageError("cannot read " + f.system);
        std::stringstream buf;
        buf << in.rdbuf();
        sys = RecursionSystem::parse(buf.str());
    } else {
        sys = need_case(f).catalog().system;
    }
    if (f.word.empty()) throw UsageError("--word is required");
    Portrait p = sys.evaluate_word(sys.parse_word(f.word), f.level);
    json j{{"portrait", encode(p)}, {"order_log2", order_log2(p)}, {"odometer", is_odometer_to_level(p)}};
    emit(f, j, encode(p) + "\n");
    return 0;
}

int cmd_order(const Flags& f) {
    GroupCase c = need_case(f);
    GroupTable t = enumerate(c.catalog().generator_portraits(f.level), enum_opts(f), f.level);
    json j = table_summary(t);
    j["closed_form_log2_order"] = closed_form_log2_order(c, f.level);
    std::ostringstream s;
    auto l = t.order_log2();
    s << "log2_order " << (l ? std::to_string(*l) : std::string("truncated")) << "\nclosed_form "
      << closed_form_log2_order(c, f.level) << "\n";
    emit(f, j, s.str());
    return 0;
}

int cmd_enumerate(const Flags& f) {
    GroupCase c = need_case(f);
    GroupTable t = enumerate(c.catalog().generator_portraits(f.level), enum_opts(f), f.level);
    if (!f.out.empty()) {
        std::ofstream o(f.out);
        if (!o) throw UsageError("cannot write " + f.out);
        for (const auto& line : t.export_lines()) o << line << "\n";
    }
    json j = table_summary(t);
    std::ostringstream s;
    s << "level " << t.level() << "\nelements " << t.size() << "\ntruncated " << (t.truncated() ? "yes" : "no")
      << "\n";
    emit(f, j, s.str());
    return 0;
}

int cmd_conjugate(const Flags& f) {
    if (f.lhs.empty() || f.rhs.empty()) throw UsageError("--lhs and --rhs are required");
    Portrait p = decode(f.lhs), q = decode(f.rhs);
    if (p.level() != q.level()) throw UsageError("elements must have the same level");
    auto w = find_conjugator_in_Wn(p, q);
    json j{{"conjugate", w.has_value()}, {"witness", w ? json(encode(w->conjugator())) : json(nullptr)}};
    emit(f, j, w ? "conjugate " + encode(w->conjugator()) + "\n" : std::string("not conjugate\n"));
    return 0;
}

int cmd_odometer(const Flags& f) {
    if (!f.element.empty()) {
        Portrait p = decode(f.element);
        bool od = is_odometer_to_level(p);
        emit(f, json{{"odometer", od}}, od ? "odometer\n" : "not an odometer\n");
        return 0;
    }
    GroupCase c = need_case(f);
    GroupTable t = enumerate(c.catalog().generator_portraits(f.level), enum_opts(f), f.level);
    if (t.truncated()) throw std::runtime_error("enumeration truncated; raise --cap or lower --level");
    std::uint64_t n = count_transitive(t);
    json j = table_summary(t);
    j["transitive"] = n;
    emit(f, j, "transitive " + std::to_string(n) + "\n");
    return 0;
}

int cmd_hausdorff(const Flags& f, bool level_given) {
    GroupCase c = need_case(f);
    json j{{"case", c.str()}, {"hausdorff", rat_str(hausdorff_exact(c))}};
    std::string text = rat_str(hausdorff_exact(c)) + "\n";
    if (level_given) {
        std::string part = rat_str(hausdorff_partial(c, f.level));
        j["level"] = f.level;
        j["partial"] = part;
        text += part + "\n";
    }
    emit(f, j, text);
    return 0;
}

int cmd_normalizer(const Flags& f) {
    GroupCase c = need_case(f);
    if (f.level > 4) throw UsageError("normalizer search is limited to level 4");
    GroupTable g = enumerate(c.catalog().generator_portraits(f.level), enum_opts(f), f.level);
    GroupTable nrm = normalizer_in_Wn(g);
    GroupTable cen = centralizer_in_Wn(g);
    json j{{"level", f.level},
           {"group_order", g.size()},
           {"normalizer_order", nrm.size()},
           {"index", index(nrm, g)},
           {"centralizer_order", cen.size()}};
    std::ostringstream s;
    s << "group_order " << g.size() << "\nnormalizer_order " << nrm.size() << "\nindex " << index(nrm, g)
      << "\ncentralizer_order " << cen.size() << "\n";
    emit(f, j, s.str());
    return 0;
}

int cmd_arith(const Flags& f, bool k_given) {
    OrbitClass o = orbit_of(f);
    ArithReport r = arith_description(o, field_of(f));
    json j{{"case", r.case_name}, {"model", r.model},         {"structure", r.structure},
           {"label", r.label_text}, {"index_bound", r.index_bound}};
    j["quotient_order"] = r.quotient_order ? json(*r.quotient_order) : json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    std::ostringstream s;
    s << "case " << r.case_name << "\nmodel " << r.model << "\nstructure " << r.structure << "\nlabel "
      << r.label_text << "\nindex_bound " << r.index_bound << "\n";
    if (r.quotient_order) s << "quotient_order " << *r.quotient_order << "\n";
    if (k_given) {
        auto c = o.group_case();
        if (!c) throw UsageError("--k needs a finite postcritical orbit");
        TwoAdic k = TwoAdic::make(f.k);
        CosetLabel l = c->periodic ? periodic_coset_label(c->r, k) : prep_coset_label(c->s, c->r, k);
        j["k"] = f.k;
        j["k_label"] = l.str();
        j["k_label_identity"] = l.is_identity();
        s << "k_label " << l.str() << "\n";
    }
    emit(f, j, s.str());
    return 0;
}

int cmd_verify(const Flags& f, bool level_given) {
    AcceptanceOptions o;
    o.seed = f.seed;
    o.cap = f.cap;
    o.threads = f.threads;
    o.level = level_given ? f.level : 0;
    std::vector<int> ids;
    try {
        ids = suite_criteria(f.suite);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    json arr = json::array();
    std::ostringstream s;
    bool ok = true;
    for (int id : ids) {
        CriterionResult r = run_criterion(id, o);
        ok = ok && r.passed;
        arr.push_back({{"criterion", r.id},
                       {"name", r.name},
                       {"suite", r.suite},
                       {"passed", r.passed},
                       {"detail", r.detail}});
        s << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail << "\n";
    }
    s << (ok ? "pass" : "fail") << "\n";
    emit(f, json{{"suite", f.suite}, {"passed", ok}, {"criteria", arr}}, s.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-level computation with binary tree automorphism groups"};
    app.require_subcommand(1);
    Flags f;
    app.add_flag("--json", f.json, "JSON output");

    auto add_case = [&](CLI::App* c) {
        c->add_option("--case", f.case_text, "periodic:r or prep:s,r");
    };
    auto add_level = [&](CLI::App* c) { return c->add_option("--level", f.level, "tree level n"); };
    auto add_enum = [&](CLI::App* c) {
        c->add_option("--cap", f.cap, "maximum elements to enumerate");
        c->add_option("--threads", f.threads, "enumeration threads")->check(CLI::PositiveNumber);
    };
    auto add_poly = [&](CLI::App* c) {
        c->add_option("--poly", f.poly,
                      "constant c of x^2 + c: \"a\", \"a/b\" or \"a mod p\"; write negatives as --poly=-1");
        c->add_option("--field", f.field, "Q, F_p or Fp");
        c->add_option("--q", f.q, "order of the finite field (a power of p)");
        c->add_option("--max-steps", f.max_steps, "orbit iteration bound over Q");
    };

    auto* classify = app.add_subcommand("classify", "classify the critical orbit of x^2 + c");
    add_poly(classify);
    auto* gens = app.add_subcommand("gens", "model generators at a level");
    add_case(gens);
    add_level(gens);
    auto* eval = app.add_subcommand("eval", "evaluate a word at a level");
    add_case(eval);
    add_level(eval);
    eval->add_option("--system", f.system, "file with one equation per line");
    eval->add_option("--word", f.word, "word such as \"a1 a2^-1\"");
    auto* order = app.add_subcommand("order", "BFS order of G_n against the closed form");
    add_case(order);
    add_level(order);
    add_enum(order);
    auto* enumerate_cmd = app.add_subcommand("enumerate", "enumerate G_n");
    add_case(enumerate_cmd);
    add_level(enumerate_cmd);
    add_enum(enumerate_cmd);
    enumerate_cmd->add_option("--out", f.out, "write sorted n:HEX lines to this file");
    auto* conjugate = app.add_subcommand("conjugate", "decide conjugacy in W_n");
    conjugate->add_option("--lhs", f.lhs, "n:HEX");
    conjugate->add_option("--rhs", f.rhs, "n:HEX");
    auto* odometer = app.add_subcommand("odometer", "odometer test or transitive count of G_n");
    odometer->add_option("--element", f.element, "n:HEX");
    add_case(odometer);
    add_level(odometer);
    add_enum(odometer);
    auto* hausdorff = app.add_subcommand("hausdorff", "Hausdorff dimension");
    add_case(hausdorff);
    auto* hlevel = add_level(hausdorff);
    auto* normalizer = app.add_subcommand("normalizer", "normalizer and centralizer of G_n in W_n (n <= 4)");
    add_case(normalizer);
    add_level(normalizer);
    add_enum(normalizer);
    auto* arith = app.add_subcommand("arith", "arithmetic monodromy description");
    add_poly(arith);
    auto* kopt = arith->add_option("--k", f.k, "odd integer: coset label of the cyclotomic value k");
    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("--suite", f.suite, "core, orders, hausdorff, conjugacy, semirigid, normalizer, odometer, arith, all");
    auto* vlevel = add_level(verify);
    verify->add_option("--seed", f.seed, "random seed");
    add_enum(verify);
    for (auto* c : app.get_subcommands({})) c->add_flag("--json", f.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify) return cmd_classify(f);
        if (*gens) return cmd_gens(f);
        if (*eval) return cmd_eval(f);
        if (*order) return cmd_order(f);
        if (*enumerate_cmd) return cmd_enumerate(f);
        if (*conjugate) return cmd_conjugate(f);
        if (*odometer) return cmd_odometer(f);
        if (*hausdorff) return cmd_hausdorff(f, hlevel->count() > 0);
        if (*normalizer) return cmd_normalizer(f);
        if (*arith) return cmd_arith(f, kopt->count() > 0);
        if (*verify) return cmd_verify(f, vlevel->count() > 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
