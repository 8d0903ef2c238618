#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uli/uli.hpp"

namespace uli::cli {

enum ExitCode { Ok = 0, DomainError = 1, UsageError = 2 };

namespace detail {

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    require(in.good(), ErrorKind::InvalidArgument, "cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidArgument, path + " is not valid JSON: " + e.what());
    }
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what)
{
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            require(used == item.size(), ErrorKind::InvalidArgument, what + ": '" + item + "' is not an integer");
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidArgument, what + ": '" + item + "' is not an integer");
        }
    }
    require(!out.empty(), ErrorKind::InvalidArgument, what + " is empty");
    return out;
}

/// Evaluation target shared by eval, nabla and marginalize: a formula (with
/// an optional constant window) or an explicit state description.
struct Query {
    std::string phi;
    std::string sd;
    std::string constants;

    bool empty() const { return phi.empty() && sd.empty(); }

    void add_to(CLI::App& app)
    {
        auto* f = app.add_option("--phi,--eval", phi, "quantifier-free sentence, e.g. \"P1(a1)&!P2(a2)\"");
        auto* s = app.add_option("--sd", sd, "state description as comma-separated atom indices");
        f->excludes(s);
        app.add_option("--constants", constants, "constant window for --phi, e.g. 1,2,3")->needs(f);
    }

    Rational evaluate(const ProbabilityFunction& w) const
    {
        if (!sd.empty())
            return w.eval_sd(StateDescription(w.level(), parse_int_list(sd, "--sd")));
        const auto formula = parse_formula(phi);
        std::vector<int> window;
        if (!constants.empty())
            window = parse_int_list(constants, "--constants");
        return eval_sentence(w, formula, window);
    }
};

inline std::optional<Principle> principle_from(const std::string& name)
{
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (key == "px")
        return Principle::Px;
    if (key == "ex")
        return Principle::Ex;
    if (key == "ip")
        return Principle::IP;
    if (key == "wip")
        return Principle::WIP;
    if (key == "additivity")
        return Principle::Additivity;
    return std::nullopt;
}

} // namespace detail

/// Runs one invocation. `args` excludes the program name. Writes exactly one
/// JSON document to `out` (except for --help), diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact unary inductive logic toolkit", "uli"};
    app.set_config("--config", "", "read flags from a TOML/INI file");
    app.require_subcommand(1);

    detail::Query eval_query;
    std::string eval_file;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a probability function");
    eval_cmd->add_option("--f", eval_file, "function descriptor (JSON file)")->required()->check(CLI::ExistingFile);
    eval_query.add_to(*eval_cmd);

    std::string check_file;
    std::string check_principle;
    int check_n = 3;
    int check_p = 0;
    int check_r = 0;
    auto* check_cmd = app.add_subcommand("check", "check a symmetry principle up to a bound");
    check_cmd->add_option("--principle", check_principle, "px | ex | ip | wip | additivity")->required();
    check_cmd->add_option("--f", check_file, "function descriptor (JSON file)")->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--n", check_n, "bound on the number of constants")->check(CLI::Range(0, 64));
    check_cmd->add_option("--p", check_p, "WIP: size of the first predicate block")->check(CLI::Range(1, 64));
    check_cmd->add_option("--r", check_r, "WIP: size of the second predicate block")->check(CLI::Range(1, 64));

    std::string extend_c;
    int extend_q = 0;
    int extend_r = 0;
    std::string extend_method = "auto";
    auto* extend_cmd = app.add_subcommand("extend", "decide extendability of a Px point");
    extend_cmd->add_option("--C", extend_c, "alternative notation C_0,...,C_q")->required();
    extend_cmd->add_option("--q", extend_q, "level of C")->required()->check(CLI::Range(1, 64));
    extend_cmd->add_option("--r", extend_r, "target level")->required()->check(CLI::Range(1, 64));
    extend_cmd->add_option("--method", extend_method, "auto | fourier-motzkin | simplex")
        ->check(CLI::IsMember({"auto", "fourier-motzkin", "simplex"}));

    std::string bern_measure;
    std::string bern_dirac;
    int bern_q = 0;
    auto* bern_cmd = app.add_subcommand("bernstein", "Bernstein point of a discrete measure");
    auto* measure_opt =
        bern_cmd->add_option("--measure", bern_measure, "measure [{\"x\",\"w\"}] (JSON file)")->check(CLI::ExistingFile);
    auto* dirac_opt = bern_cmd->add_option("--dirac", bern_dirac, "point mass at x");
    measure_opt->excludes(dirac_opt);
    bern_cmd->add_option("--q", bern_q, "level")->required()->check(CLI::Range(1, 64));

    std::string nabla_file;
    int nabla_q = 0;
    bool nabla_no_repl = false;
    detail::Query nabla_query;
    auto* nabla_cmd = app.add_subcommand("nabla", "row-sampling function of a state-description matrix");
    nabla_cmd->add_option("--upsilon", nabla_file, "matrix {\"nu\",\"rows\"} (JSON file)")
        ->required()
        ->check(CLI::ExistingFile);
    nabla_cmd->add_option("--q", nabla_q, "level")->required()->check(CLI::Range(1, 64));
    nabla_cmd->add_flag("--no-replacement", nabla_no_repl, "pick distinct rows only");
    nabla_query.add_to(*nabla_cmd);

    std::string dec_c;
    std::string dec_file;
    int dec_q = 0;
    int dec_verify = 3;
    auto* dec_cmd = app.add_subcommand("decompose", "write y_c (or a mixture) as (1+lambda)w1 - lambda w2");
    auto* dec_c_opt = dec_cmd->add_option("--c", dec_c, "point of the simplex (atom order)");
    auto* dec_f_opt =
        dec_cmd->add_option("--f", dec_file, "mixture of symmetrized functions (JSON file)")->check(CLI::ExistingFile);
    dec_c_opt->excludes(dec_f_opt);
    dec_cmd->add_option("--q", dec_q, "level of c")->check(CLI::Range(1, 64));
    dec_cmd->add_option("--verify-n", dec_verify, "verification bound")->check(CLI::Range(0, 16));

    std::string marg_file;
    int marg_q = 0;
    detail::Query marg_query;
    auto* marg_cmd = app.add_subcommand("marginalize", "restrict a function to its first q predicates");
    marg_cmd->add_option("--f", marg_file, "function descriptor (JSON file)")->required()->check(CLI::ExistingFile);
    marg_cmd->add_option("--q", marg_q, "target level")->required()->check(CLI::Range(1, 64));
    marg_query.add_to(*marg_cmd);

    try {
        if (!args.empty() && !args.front().starts_with("-") && !app.get_subcommand_no_throw(args.front()))
            throw CLI::ExtrasError("unknown subcommand '" + args.front() + "'", CLI::ExitCodes::ExtrasError);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (*check_cmd) {
            const auto principle = detail::principle_from(check_principle);
            if (!principle)
                throw CLI::ValidationError("--principle", "unknown principle '" + check_principle + "'");
            if (*principle == Principle::WIP && (check_p == 0 || check_r == 0))
                throw CLI::ValidationError("--p/--r", "required for --principle wip");
        }
        if (*bern_cmd && bern_measure.empty() && bern_dirac.empty())
            throw CLI::RequiredError("--measure or --dirac");
        if (*dec_cmd && dec_c.empty() && dec_file.empty())
            throw CLI::RequiredError("--c or --f");
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        out << Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump(2) << '\n';
        return UsageError;
    }

    try {
        Json result;
        if (*eval_cmd) {
            const auto w = function_from_json(detail::read_json_file(eval_file));
            require(!eval_query.empty(), ErrorKind::InvalidArgument, "eval needs --phi or --sd");
            result = {{"value", format_rational(eval_query.evaluate(w))}};
        } else if (*check_cmd) {
            const auto w = function_from_json(detail::read_json_file(check_file));
            CheckReport report;
            switch (*detail::principle_from(check_principle)) {
            case Principle::Px: report = check_px(w, check_n); break;
            case Principle::Ex: report = check_ex(w, check_n); break;
            case Principle::IP: report = check_ip(w, check_n); break;
            case Principle::WIP: report = check_wip(w, check_p, check_r, check_n); break;
            case Principle::Additivity: report = check_additivity(w, check_n); break;
            }
            result = to_json(report);
        } else if (*extend_cmd) {
            const LpMethod method = extend_method == "fourier-motzkin" ? LpMethod::FourierMotzkin
                                    : extend_method == "simplex"       ? LpMethod::Simplex
                                                                       : LpMethod::Auto;
            const AltNotation c(extend_q, parse_rational_list(extend_c));
            result = to_json(extendable(c, extend_r, method));
        } else if (*bern_cmd) {
            const auto rho = bern_measure.empty() ? DiscreteMeasure::dirac(parse_rational(bern_dirac))
                                                  : measure_from_json(detail::read_json_file(bern_measure));
            const auto alt = bernstein(rho, bern_q);
            result = {{"q", bern_q},
                      {"measure", to_json(rho)},
                      {"C", to_json(alt.values())},
                      {"x", to_json(from_alt(alt).values())}};
        } else if (*nabla_cmd) {
            const auto upsilon = upsilon_from_json(detail::read_json_file(nabla_file));
            const auto w = nabla_no_repl ? nabla_no_replacement(upsilon, nabla_q) : nabla(upsilon, nabla_q);
            result = {{"function", to_json(w)}};
            if (!nabla_query.empty())
                result["value"] = format_rational(nabla_query.evaluate(w));
        } else if (*dec_cmd) {
            if (!dec_c.empty()) {
                auto values = parse_rational_list(dec_c);
                const SimplexPoint c =
                    dec_q > 0 ? SimplexPoint(dec_q, std::move(values)) : SimplexPoint(std::move(values));
                result = to_json(decompose_y(c, dec_verify));
            } else {
                const auto w = function_from_json(detail::read_json_file(dec_file));
                require(dec_q == 0 || dec_q == w.level(), ErrorKind::LevelMismatch,
                        "--q " + std::to_string(dec_q) + " differs from the function level " +
                            std::to_string(w.level()));
                result = to_json(decompose_px(w, dec_verify));
            }
        } else if (*marg_cmd) {
            const auto w = restrict(function_from_json(detail::read_json_file(marg_file)), marg_q);
            result = {{"function", to_json(w)}};
            if (!marg_query.empty())
                result["value"] = format_rational(marg_query.evaluate(w));
        }
        out << result.dump(2) << '\n';
        return Ok;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        out << to_json(e).dump(2) << '\n';
        return DomainError;
    }
}

} // namespace uli::cli
