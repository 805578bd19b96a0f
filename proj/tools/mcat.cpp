// mcat: bound tables for m-dimensional category-type invariants.
//
//   mcat bounds FILE [TARGET INVARIANT [M-RANGE]]   tables for one target or the file's queries
//   mcat paper-suite                                 reproduce the built-in reference tables
//   mcat validate FILE                               check every algebra and morphism
//
// Exit codes: 0 success, 1 validation or usage error, 2 inconsistent model.

#include "mcat/mcat.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInconsistent = 2;

struct BoundsArgs {
    std::string file;
    std::vector<std::string> target; // TARGET INVARIANT [RANGE]
    std::string coeff;
    int max_m = 0;
    bool no_literature = false;
    bool json = false;
    bool certificates = false;
};

std::optional<mcat::CoefficientDomain> coeff_override(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return mcat::CoefficientDomain::parse(text);
}

int run_bounds(const BoundsArgs& args) {
    const mcat::ModelFile model = mcat::load_model_file(args.file, coeff_override(args.coeff));
    std::vector<mcat::Query> queries;
    if (!args.target.empty()) {
        if (args.target.size() < 2 || args.target.size() > 3) {
            std::cerr << "error: expected TARGET INVARIANT [M-RANGE]\n";
            return kExitInvalid;
        }
        mcat::Query q;
        q.target = args.target[0];
        const auto inv = mcat::parse_invariant(args.target[1]);
        if (!inv) {
            std::cerr << "error: unknown invariant '" << args.target[1] << "' (cat, tc, secat, dm, hdm)\n";
            return kExitInvalid;
        }
        q.invariant = *inv;
        if (args.target.size() == 3) {
            const auto [from, to] = mcat::parse_range(args.target[2]);
            q.from = from;
            q.to = to;
        }
        const bool known = (q.invariant == mcat::Invariant::Cat || q.invariant == mcat::Invariant::Tc)
                               ? model.bundle.spaces.count(q.target) > 0
                           : q.invariant == mcat::Invariant::Secat ? model.bundle.fibrations.count(q.target) > 0
                                                                   : model.bundle.maps.count(q.target) > 0;
        if (!known) {
            std::cerr << args.file << ": error: no target '" << q.target << "' for invariant " << args.target[1] << "\n";
            return kExitInvalid;
        }
        queries.push_back(q);
    } else {
        queries = model.queries;
        if (queries.empty()) {
            std::cerr << args.file << ": error: no target given and the file has no \"queries\"\n";
            return kExitInvalid;
        }
    }

    mcat::Options options;
    options.literature = !args.no_literature;
    if (args.max_m > 0) {
        options.max_m = args.max_m;
    } else {
        // make sure every requested column exists
        int want = 0;
        for (const auto& q : queries) want = std::max(want, q.to.value_or(q.from));
        mcat::TableSet probe = mcat::compute_tables(model.bundle, options);
        if (want > probe.max_m) options.max_m = want;
    }
    const mcat::TableSet set = mcat::compute_tables(model.bundle, options);

    if (args.json) {
        mcat::json out;
        out["max_m"] = set.max_m;
        mcat::json tables = mcat::json::array();
        for (const auto& q : queries) {
            mcat::json t = mcat::table_to_json(set.get(q.invariant, q.target));
            mcat::json kept = mcat::json::array();
            for (const auto& e : t["entries"]) {
                if (e["m"].is_number()) {
                    const int m = e["m"].get<int>();
                    if (m < q.from || (q.to && m > *q.to)) continue;
                }
                kept.push_back(e);
            }
            t["entries"] = std::move(kept);
            tables.push_back(std::move(t));
        }
        out["tables"] = std::move(tables);
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& q : queries)
            std::cout << mcat::render_table(set, mcat::table_id(q.invariant, q.target), q.from, q.to, args.certificates);
    }
    return kExitOk;
}

int run_validate(const std::string& file, const std::string& coeff) {
    const mcat::ModelFile model = mcat::load_model_file(file, coeff_override(coeff));
    std::cout << "ok (" << model.bundle.spaces.size() << " spaces, " << model.bundle.fibrations.size() << " fibrations, "
              << model.bundle.maps.size() << " map pairs)\n";
    return kExitOk;
}

int run_suite(bool json, bool no_literature) {
    std::vector<mcat::GoldenResult> results;
    for (auto c : mcat::golden_cases()) {
        c.options.literature = !no_literature;
        results.push_back(mcat::run_golden(c));
    }
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    if (json) {
        mcat::json out;
        mcat::json cases = mcat::json::array();
        for (const auto& r : results) cases.push_back({{"case", r.name}, {"passed", r.passed}, {"diffs", r.diffs}});
        out["cases"] = std::move(cases);
        out["passed"] = static_cast<int>(results.size()) - failed;
        out["failed"] = failed;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
            for (const auto& d : r.diffs) std::cout << "    " << d << "\n";
        }
        std::cout << (results.size() - failed) << "/" << results.size() << " cases match\n";
    }
    return failed == 0 ? kExitOk : kExitInvalid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified bounds for cat_m, TC^m, secat_m, D_m and H*D_m from cohomology models"};
    app.require_subcommand(1);

    BoundsArgs bounds;
    auto* cmd_bounds = app.add_subcommand("bounds", "Compute bound tables");
    cmd_bounds->add_option("file", bounds.file, "Model file (JSON)")->required();
    cmd_bounds->add_option("target", bounds.target, "TARGET INVARIANT [M-RANGE], e.g. sigma2 tc 1..6");
    cmd_bounds->add_option("--coeff", bounds.coeff, "Override the file's default coefficient domain (Q, Z, F<p>)");
    cmd_bounds->add_option("--max-m", bounds.max_m, "Largest finite m column")->check(CLI::PositiveNumber);
    cmd_bounds->add_flag("--no-literature", bounds.no_literature, "Ignore literature values");
    cmd_bounds->add_flag("--json", bounds.json, "Machine-readable output");
    cmd_bounds->add_flag("--certificates", bounds.certificates, "Print cup-product witnesses");

    bool suite_json = false, suite_no_lit = false;
    auto* cmd_suite = app.add_subcommand("paper-suite", "Reproduce the built-in reference tables");
    cmd_suite->add_flag("--json", suite_json, "Machine-readable output");
    cmd_suite->add_flag("--no-literature", suite_no_lit, "Ignore literature values");

    std::string validate_file, validate_coeff;
    auto* cmd_validate = app.add_subcommand("validate", "Validate a model file without computing bounds");
    cmd_validate->add_option("file", validate_file, "Model file (JSON)")->required();
    cmd_validate->add_option("--coeff", validate_coeff, "Override the default coefficient domain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    const std::string file = cmd_bounds->parsed() ? bounds.file : validate_file;
    try {
        if (cmd_bounds->parsed()) return run_bounds(bounds);
        if (cmd_suite->parsed()) return run_suite(suite_json, suite_no_lit);
        return run_validate(validate_file, validate_coeff);
    } catch (const mcat::InconsistentModel& e) {
        std::cerr << file << ": " << e.what();
        return kExitInconsistent;
    } catch (const mcat::ModelError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const mcat::AlgebraError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << file << ": error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
