#include "cli.hpp"

#include "ofdma/exact.hpp"
#include "ofdma/generate.hpp"
#include "ofdma/io.hpp"
#include "ofdma/reduction.hpp"
#include "ofdma/sumrate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ofdma::cli {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write " + path);
    out << text;
}

unsigned threads_from_env()
{
    if (const char* env = std::getenv("ALLOC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::vector<std::size_t> parse_sweep(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw FormatError("--sweep-n expects FROM:TO, e.g. 1e3:1e6");
    const double from = std::stod(text.substr(0, colon));
    const double to = std::stod(text.substr(colon + 1));
    if (!(from >= 1.0) || !(to >= from))
        throw FormatError("--sweep-n range must satisfy 1 <= FROM <= TO");
    std::vector<std::size_t> sizes;
    for (double n = from; n <= to * (1 + 1e-12); n *= 10.0)
        sizes.push_back(static_cast<std::size_t>(std::llround(n)));
    return sizes;
}

struct SolveArgs {
    std::string instance;
    std::string method = "auto";
    std::string out;
    double tol = 0.0;
    unsigned threads = 0;
};

int run_solve(const SolveArgs& args, std::ostream& out, std::ostream& err)
{
    const InstanceFile file = parse_instance_file(read_file(args.instance));
    const SystemInstance& inst = file.instance;
    require_valid(inst, file.problem);

    ExactOptions options;
    options.threads = args.threads ? args.threads : threads_from_env();

    SolveReport report;
    std::string method = args.method;
    const Utility kind = file.utility.value_or(Utility::H1);
    if (file.problem == Problem::MaxUtility) {
        if (method == "matching") {
            err << "error: the matching solver applies to min_power problems only\n";
            return kValidation;
        }
        if (method == "auto")
            method = kind == Utility::H1 || inst.num_receivers == 1 ? "two-stage" : "exact";
        if (method == "two-stage") {
            if (kind != Utility::H1 && inst.num_receivers != 1) {
                err << "error: the two-stage solver is optimal for h1 (or K = 1) only; use --method exact\n";
                return kValidation;
            }
            report = solve_sumrate(inst);
            if (kind != Utility::H1)
                report.value = utility(compute_rates(inst, report.allocation), kind);
        } else {
            report = exact_max_utility(inst, kind, options);
        }
    } else {
        if (method == "two-stage") {
            err << "error: the two-stage solver applies to max_utility problems only\n";
            return kValidation;
        }
        if (method == "auto")
            method = inst.num_receivers == inst.num_subcarriers ? "matching" : "exact";
        report = method == "matching" ? min_power_matching(inst) : exact_min_total_power(inst, options);
    }

    std::ostringstream summary;
    summary << "# status=" << to_string(report.status) << " method=" << method
            << " problem=" << to_string(file.problem);
    if (file.problem == Problem::MaxUtility)
        summary << " utility=" << to_string(kind);
    summary << " value=" << format_double(report.value)
            << " total_power=" << format_double(report.allocation.total_power())
            << " assignments_explored=" << report.assignments_explored
            << " elapsed_s=" << format_double(report.elapsed_seconds) << '\n';

    if (report.status == SolveStatus::Infeasible) {
        out << summary.str();
        return kInfeasible;
    }

    // Check only the constraints of the problem that was solved.
    SystemInstance checked = inst;
    if (file.problem == Problem::MaxUtility)
        checked.rate_targets.reset();
    else
        checked.total_budget.reset();
    const double tol = args.tol > 0.0 ? args.tol : default_tolerance(inst);
    const ConstraintReport check = check_allocation(checked, report.allocation, tol);
    if (!check.all_ok()) {
        err << "error: solver output failed re-validation (ofdma=" << check.ofdma_ok << " caps=" << check.caps_ok
            << " qos=" << check.qos_ok << " budget=" << check.budget_ok << ")\n";
        return kInternal;
    }

    const std::string csv = format_allocation_csv(inst, report.allocation) + summary.str();
    if (args.out.empty()) {
        out << csv;
    } else {
        write_file(args.out, csv);
        out << summary.str();
    }
    return report.status == SolveStatus::IterLimit ? kLimit : kOk;
}

std::string describe(const Partition& p)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < p.groups.size(); ++k) {
        os << (k ? " " : "") << '{';
        for (std::size_t i = 0; i < p.groups[k].size(); ++i)
            os << (i ? "," : "") << p.groups[k][i] + 1;
        os << '}';
    }
    return os.str();
}

int run_verify(const std::string& path, unsigned threads, std::ostream& out)
{
    const ThreePartitionInstance tpi = parse_partition_file(read_file(path));
    ExactOptions options;
    options.threads = threads ? threads : threads_from_env();
    const EquivalenceReport r = verify_reduction(tpi, options);

    out << "partition: " << (r.partition_exists ? "yes" : "no");
    if (r.partition)
        out << " " << describe(*r.partition);
    out << '\n';
    out << "ofdma feasible: " << (r.allocation_feasible ? "yes" : "no");
    if (r.allocation_feasible)
        out << " min_total_power=" << format_double(r.min_total_power);
    out << '\n';
    if (r.decoded)
        out << "decoded: " << describe(*r.decoded) << (r.decoded_is_certificate ? " (certificate)" : " (not a certificate)")
            << '\n';
    out << "agree: " << (r.agree ? "yes" : "no") << ", fact1: B=" << tpi.bound << (r.fact1_ok ? " ok" : " FAILED")
        << ", fact2: 3K=" << 3 * tpi.groups << (r.fact2_ok ? " ok" : " FAILED") << '\n';
    return r.agree && r.fact1_ok && r.fact2_ok ? kOk : kInternal;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Joint subcarrier and power allocation solvers for downlink OFDMA", "ofdma"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance file, print the allocation as CSV");
    solve_cmd->add_option("--instance", solve.instance, "instance JSON file")->required();
    solve_cmd->add_option("--method", solve.method, "auto|two-stage|exact|matching")
        ->check(CLI::IsMember({"auto", "two-stage", "exact", "matching"}));
    solve_cmd->add_option("--tol", solve.tol, "tolerance for re-validating the allocation");
    solve_cmd->add_option("--threads", solve.threads, "enumeration workers (default $ALLOC_THREADS or 1)");
    solve_cmd->add_option("--out", solve.out, "write the CSV here instead of stdout");

    std::string reduce_in, reduce_out;
    auto* reduce_cmd = app.add_subcommand("reduce", "encode a 3-partition instance as an OFDMA instance");
    reduce_cmd->add_option("--partition-instance", reduce_in)->required();
    reduce_cmd->add_option("--out", reduce_out)->required();

    std::string verify_in;
    unsigned verify_threads = 0;
    auto* verify_cmd = app.add_subcommand("verify-reduction", "check both sides of the 3-partition reduction");
    verify_cmd->add_option("--partition-instance", verify_in)->required();
    verify_cmd->add_option("--threads", verify_threads);

    RandomInstanceSpec gen;
    std::string gen_out, gen_utility = "h1";
    std::vector<double> gen_targets;
    double gen_budget = 0.0, gen_cap = 0.0;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
    gen_cmd->add_option("--receivers", gen.receivers)->required();
    gen_cmd->add_option("--subcarriers", gen.subcarriers)->required();
    gen_cmd->add_option("--seed", gen.seed)->required();
    auto* budget_opt = gen_cmd->add_option("--budget", gen_budget, "total power budget (max_utility)");
    auto* targets_opt = gen_cmd->add_option("--targets", gen_targets, "rate targets, one or K values (min_power)")
                            ->delimiter(',');
    budget_opt->excludes(targets_opt);
    gen_cmd->add_option("--caps", gen_cap, "per-subcarrier cap (default 4 * budget / N, else 1)");
    gen_cmd->add_option("--utility", gen_utility)->check(CLI::IsMember({"h1", "h2", "h3", "h4"}));
    gen_cmd->add_option("--out", gen_out);

    std::string sweep = "1e3:1e6";
    std::size_t bench_k = 100;
    std::uint64_t bench_seed = 1;
    unsigned bench_repeat = 3;
    auto* bench_cmd = app.add_subcommand("bench", "time the two-stage solver over a sweep of N");
    bench_cmd->add_option("--sweep-n", sweep, "decades FROM:TO");
    bench_cmd->add_option("--receivers", bench_k);
    bench_cmd->add_option("--seed", bench_seed);
    bench_cmd->add_option("--repeat", bench_repeat);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kValidation;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(solve, out, err);
        if (reduce_cmd->parsed()) {
            const ThreePartitionInstance tpi = parse_partition_file(read_file(reduce_in));
            InstanceFile file;
            file.problem = Problem::MinPower;
            file.instance = encode(tpi);
            write_file(reduce_out, format_instance_file(file));
            return kOk;
        }
        if (verify_cmd->parsed())
            return run_verify(verify_in, verify_threads, out);
        if (gen_cmd->parsed()) {
            if (budget_opt->count() == 0 && targets_opt->count() == 0) {
                err << "error: gen needs --budget (max_utility) or --targets (min_power)\n";
                return kValidation;
            }
            if (budget_opt->count())
                gen.budget = gen_budget;
            if (targets_opt->count())
                gen.targets = gen_targets;
            if (gen_cap > 0.0)
                gen.cap = gen_cap;
            InstanceFile file;
            file.problem = gen.budget ? Problem::MaxUtility : Problem::MinPower;
            if (gen.budget)
                file.utility = parse_utility(gen_utility);
            file.instance = random_instance(gen);
            const std::string text = format_instance_file(file);
            if (gen_out.empty())
                out << text;
            else
                write_file(gen_out, text);
            return kOk;
        }
        if (bench_cmd->parsed()) {
            const auto rows = bench_sumrate(parse_sweep(sweep), bench_k, bench_seed, bench_repeat);
            out << "N,K,seconds,comparisons,sorted_elements\n";
            for (const auto& r : rows)
                out << r.subcarriers << ',' << r.receivers << ',' << format_double(r.seconds) << ','
                    << r.comparisons << ',' << r.sorted_elements << '\n';
            out << "# loglog_slope=" << format_double(loglog_slope(rows)) << '\n';
            return kOk;
        }
    } catch (const ValidationError& e) {
        err << "error: invalid instance: " << e.what() << '\n';
        return kValidation;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const LimitExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kLimit;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kValidation;
}

} // namespace ofdma::cli
