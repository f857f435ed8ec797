#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arbor/acceptance.hpp"
#include "arbor/catalog.hpp"
#include "arbor/conjugacy.hpp"
#include "arbor/dynamics.hpp"
#include "arbor/level_groups.hpp"
#include "arbor/portrait.hpp"
#include "arbor/recursion.hpp"

namespace py = pybind11;
using namespace arbor;

namespace {

std::string rat_str(const boost::rational<std::int64_t>& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

std::optional<std::uint64_t> opt_q(std::uint64_t q) { return q ? std::optional<std::uint64_t>(q) : std::nullopt; }

}  // namespace

PYBIND11_MODULE(_arbor, m) {
    m.doc() = "Finite-level computation with binary tree automorphism groups";

    py::class_<Portrait>(m, "Portrait")
        .def(py::init([](const std::string& text) { return decode(text); }), py::arg("text"))
        .def_static("identity", &Portrait::identity)
        .def_static("sigma", &Portrait::sigma)
        .def_static("pair", &Portrait::pair, py::arg("p0"), py::arg("p1"), py::arg("swap"))
        .def_static("random", [](int n, std::uint64_t seed) { return random_element(n, seed); }, py::arg("n"),
                    py::arg("seed") = 1)
        .def_property_readonly("level", &Portrait::level)
        .def("is_identity", &Portrait::is_identity)
        .def("decompose", &Portrait::decompose)
        .def("__mul__", [](const Portrait& p, const Portrait& q) { return compose(p, q); })
        .def("__pow__", [](const Portrait& p, std::int64_t k) { return power(p, k); })
        .def("inverse", [](const Portrait& p) { return invert(p); })
        .def("order_log2", [](const Portrait& p) { return order_log2(p); })
        .def("sign", [](const Portrait& p, int n) { return sign(p, n); })
        .def("sign_vector", [](const Portrait& p) { return sign_vector(p); })
        .def("truncate", [](const Portrait& p, int n) { return truncate(p, n); })
        .def("section", [](const Portrait& p, const std::vector<int>& w) { return section(p, w); })
        .def("apply_index", [](const Portrait& p, std::uint64_t j) { return apply_index(p, j); })
        .def("is_odometer", [](const Portrait& p) { return is_odometer_to_level(p); })
        .def("__eq__", [](const Portrait& a, const Portrait& b) { return a == b; })
        .def("__hash__", &Portrait::hash)
        .def("__str__", [](const Portrait& p) { return encode(p); })
        .def("__repr__", [](const Portrait& p) { return "Portrait('" + encode(p) + "')"; });

    py::class_<GroupCase>(m, "GroupCase")
        .def(py::init([](const std::string& text) { return GroupCase::parse(text); }), py::arg("text"))
        .def_static("periodic", &GroupCase::Periodic)
        .def_static("prep", &GroupCase::PrePeriodic)
        .def_readonly("is_periodic", &GroupCase::periodic)
        .def_readonly("s", &GroupCase::s)
        .def_readonly("r", &GroupCase::r)
        .def("generators", [](const GroupCase& c, int n) { return c.catalog().generator_portraits(n); })
        .def("closed_form_log2_order", [](const GroupCase& c, int n) { return closed_form_log2_order(c, n); })
        .def("hausdorff", [](const GroupCase& c) { return rat_str(hausdorff_exact(c)); })
        .def("hausdorff_partial", [](const GroupCase& c, int n) { return rat_str(hausdorff_partial(c, n)); })
        .def("__eq__", [](const GroupCase& a, const GroupCase& b) { return a == b; })
        .def("__str__", &GroupCase::str);

    py::class_<GroupTable>(m, "GroupTable")
        .def_property_readonly("level", &GroupTable::level)
        .def_property_readonly("truncated", &GroupTable::truncated)
        .def("__len__", &GroupTable::size)
        .def("order_log2", &GroupTable::order_log2)
        .def("contains", &GroupTable::contains)
        .def("express", &GroupTable::express)
        .def("elements", &GroupTable::elements)
        .def("count_transitive", [](const GroupTable& t) { return count_transitive(t); });

    m.def(
        "enumerate",
        [](const std::vector<Portrait>& gens, std::uint64_t cap, bool words, int threads) {
            EnumerateOptions o;
            o.cap = cap;
            o.track_words = words;
            o.threads = threads;
            return enumerate(gens, o);
        },
        py::arg("gens"), py::arg("cap") = std::uint64_t{1} << 24, py::arg("words") = false, py::arg("threads") = 1);
    m.def(
        "group",
        [](const GroupCase& c, int n, std::uint64_t cap) {
            EnumerateOptions o;
            o.cap = cap;
            return enumerate(c.catalog().generator_portraits(n), o, n);
        },
        py::arg("case"), py::arg("n"), py::arg("cap") = std::uint64_t{1} << 24);
    m.def("normalizer_order", [](const GroupTable& g) { return normalizer_in_Wn(g).size(); });
    m.def("sign_image_is_full", &sign_image_is_full);

    m.def("are_conjugate", &are_conjugate_in_Wn);
    m.def("find_conjugator", [](const Portrait& p, const Portrait& q) -> std::optional<Portrait> {
        auto w = find_conjugator_in_Wn(p, q);
        if (!w) return std::nullopt;
        return w->conjugator();
    });
    m.def("power_conjugator",
          [](const Portrait& p, std::int64_t k) { return power_conjugator(p, k).conjugator(); });
    m.def("evaluate",
          [](const std::string& system, const std::string& word, int n) {
              RecursionSystem sys = RecursionSystem::parse(system);
              return sys.evaluate_word(sys.parse_word(word), n);
          },
          py::arg("system"), py::arg("word"), py::arg("n"));

    m.def(
        "classify",
        [](const std::string& c, const std::string& field, std::uint64_t q, int max_steps) {
            OrbitClass o = critical_orbit(c, FieldSpec::parse(field, opt_q(q)), max_steps);
            py::dict d;
            d["class"] = o.kind_name();
            d["s"] = o.s;
            d["r"] = o.r;
            if (o.kind == OrbitKind::InfiniteCertified) d["escape_index"] = o.escape_index;
            d["steps"] = o.steps;
            return d;
        },
        py::arg("c"), py::arg("field") = "Q", py::arg("q") = 0, py::arg("max_steps") = 64);
    m.def(
        "arith",
        [](const std::string& c, const std::string& field, std::uint64_t q) {
            FieldSpec f = FieldSpec::parse(field, opt_q(q));
            ArithReport r = arith_description(critical_orbit(c, f), f);
            py::dict d;
            d["case"] = r.case_name;
            d["structure"] = r.structure;
            d["label"] = r.label_text;
            d["index_bound"] = r.index_bound;
            d["quotient_order"] = r.quotient_order;
            return d;
        },
        py::arg("c"), py::arg("field") = "Q", py::arg("q") = 0);

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, int level) {
            AcceptanceOptions o;
            o.seed = seed;
            o.level = level;
            py::list out;
            for (const auto& r : run_suite(suite, o)) {
                py::dict d;
                d["criterion"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("seed") = 1, py::arg("level") = 0);
}
