// stav: command-line front end for the satotate library.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "satotate/curves/theta.hpp"
#include "satotate/curves/trace.hpp"
#include "satotate/error.hpp"
#include "satotate/family/family.hpp"
#include "satotate/io/cache.hpp"
#include "satotate/io/tables.hpp"
#include "satotate/lconstants/cfr.hpp"
#include "satotate/lconstants/euler.hpp"
#include "satotate/lconstants/partial_sums.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/progressions/ap.hpp"
#include "satotate/quadforms/htable.hpp"
#include "satotate/quadforms/lseries.hpp"
#include "satotate/verify/checks.hpp"

namespace {

using namespace satotate;
using json = nlohmann::ordered_json;

struct RunConfig {
    std::uint64_t x = 1000;
    std::int64_t A = 10;
    std::int64_t B = 10;
    double alpha = 0.2;
    double beta = 0.8;
    std::int64_t r = 1;
    std::uint64_t p = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t D = 0;
    std::uint64_t q = 1;
    std::uint64_t Q = 10;
    double y = 100;
    std::uint64_t U = 10000;
    std::uint64_t V = 100;
    std::int64_t n = 0;
    std::int64_t f = 1;
    std::uint64_t cutoff = 100000;
    double rel_tol = 0.2;
    std::string backend = "auto";
    std::string path = "per_curve";
    std::string mode = "forms";
    std::string suite = "all";
    unsigned workers = 1;
    std::string cache;
    std::string out;
    std::string format = "csv";
    std::string config;
};

// Fields that change results; workers, cache, and out do not.
json semantic_fields(const RunConfig& c) {
    return json{{"x", c.x},         {"A", c.A},   {"B", c.B},         {"alpha", c.alpha},     {"beta", c.beta},
                {"r", c.r},         {"p", c.p},   {"a", c.a},         {"b", c.b},             {"D", c.D},
                {"q", c.q},         {"Q", c.Q},   {"y", c.y},         {"U", c.U},             {"V", c.V},
                {"n", c.n},         {"f", c.f},   {"cutoff", c.cutoff}, {"rel_tol", c.rel_tol}, {"backend", c.backend},
                {"path", c.path}, {"mode", c.mode}};
}

class Cli {
public:
    Cli() : app_("Sato-Tate averages over families of elliptic curves", "stav") {
        app_.require_subcommand(1);
        app_.fallthrough();
        add("--x", cfg_.x, "upper bound for primes");
        add("--A", cfg_.A, "box half-width in a");
        add("--B", cfg_.B, "box half-width in b");
        add("--alpha", cfg_.alpha, "window start");
        add("--beta", cfg_.beta, "window end");
        add("--r", cfg_.r, "trace value r");
        add("--p", cfg_.p, "prime");
        add("--a", cfg_.a, "curve coefficient a, or residue a");
        add("--b", cfg_.b, "curve coefficient b");
        add("--D", cfg_.D, "negative discriminant");
        add("--q", cfg_.q, "modulus");
        add("--Q", cfg_.Q, "largest modulus");
        add("--y", cfg_.y, "window length");
        add("--U", cfg_.U, "partial sum bound in n");
        add("--V", cfg_.V, "partial sum bound in f");
        add("--n", cfg_.n, "argument n of c_f^r(n)");
        add("--f", cfg_.f, "argument f of c_f^r(n)");
        add("--cutoff", cfg_.cutoff, "Euler product prime cutoff");
        add("--rel-tol", cfg_.rel_tol, "relative band for exceptions");
        add("--backend", cfg_.backend, "naive|bsgs|auto")->check(CLI::IsMember({"naive", "bsgs", "auto"}));
        add("--path", cfg_.path, "per_curve|per_residue|both")
            ->check(CLI::IsMember({"per_curve", "per_residue", "both"}));
        add("--mode", cfg_.mode, "forms|lseries")->check(CLI::IsMember({"forms", "lseries"}));
        add("--suite", cfg_.suite, "exact|statistical|all")->check(CLI::IsMember({"exact", "statistical", "all"}));
        add("--workers", cfg_.workers, "worker threads")->check(CLI::PositiveNumber);
        add("--cache", cfg_.cache, "cache directory");
        add("--out", cfg_.out, "output file");
        add("--format", cfg_.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        app_.add_option("--config", cfg_.config, "JSON file of defaults; flags take precedence");

        sub("sieve", "count primes up to --x", [this] { return sieve(); });
        sub("trace", "Frobenius trace of E(a,b) at --p, or at every good prime <= --x", [this] { return trace(); });
        sub("classno", "Kronecker class number H(D)", [this] { return classno(); });
        sub("htable", "class numbers H(r^2-4p) for p <= --x", [this] { return htable(); });
        sub("mainterm", "main term for the window up to --x", [this] { return mainterm(); });
        sub("average", "family average over the box", [this] { return experiment(); });
        sub("variance", "second moment about xF over the box", [this] { return experiment(); });
        sub("exceptions", "curves with |Theta - xF| > rel_tol xF", [this] { return experiment(); });
        sub("kr", "Euler-product constant K_r", [this] { return kr(); });
        sub("cfr", "c_f^r(n) with --n, or the partial sum S(U,V,r) without", [this] { return cfr(); });
        sub("bdh", "prime sums in progressions and their second moment", [this] { return bdh(); });
        sub("verify", "run the acceptance checks", [this] { return verify(); });
    }

    int run(int argc, char** argv) {
        try {
            app_.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app_.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app_.exit(e);
        } catch (const CLI::ParseError& e) {
            report_error("domain", e.what());
            return 1;
        }
        try {
            apply_config();
            return action_();
        } catch (const Error& e) {
            report_error(to_string(e.kind()), e.what());
            return e.is_consistency_failure() ? 2 : 1;
        } catch (const json::exception& e) {
            report_error("domain", std::string("config: ") + e.what());
            return 1;
        } catch (const std::exception& e) {
            report_error("resource", e.what());
            return 1;
        }
    }

private:
    template <class T>
    CLI::Option* add(const std::string& name, T& target, const std::string& help) {
        auto* opt = app_.add_option(name, target, help);
        auto key = name.substr(2);
        std::replace(key.begin(), key.end(), '-', '_');
        setters_[key] = [this, name, &target](const json& v) {
            if (app_.count(name) == 0) target = v.get<T>();
        };
        return opt;
    }

    void sub(const std::string& name, const std::string& help, std::function<int()> action) {
        auto* s = app_.add_subcommand(name, help);
        s->callback([this, action] { action_ = action; });
    }

    void apply_config() {
        if (cfg_.config.empty()) return;
        std::ifstream in(cfg_.config);
        if (!in) throw DomainError("cannot open config file " + cfg_.config);
        const auto j = json::parse(in);
        if (!j.is_object()) throw DomainError("config file must hold a JSON object");
        for (const auto& [key, value] : j.items()) {
            auto it = setters_.find(key);
            if (it == setters_.end()) throw DomainError("unknown config key '" + key + "'");
            it->second(value);
        }
    }

    static void report_error(const std::string& kind, const std::string& message) {
        std::string flat = message;
        for (auto& c : flat)
            if (c == '\n') c = ' ';
        std::cerr << "error kind=" << kind << " message=" << json(flat).dump() << '\n';
    }

    curves::Backend backend() const {
        if (cfg_.backend == "naive") return curves::Backend::naive;
        if (cfg_.backend == "bsgs") return curves::Backend::bsgs;
        return curves::Backend::automatic;
    }

    IntervalSpec window() const { return IntervalSpec::closed(cfg_.alpha, cfg_.beta); }

    family::SweepOptions sweep_options() const {
        return {backend(), curves::default_bsgs_threshold, cfg_.workers};
    }

    // Writes the table to --out, or to stdout when --out is empty.
    void emit(const io::Table& table) const {
        std::ostringstream body;
        if (cfg_.format == "json") {
            json meta{{"config", semantic_fields(cfg_)}, {"workers", cfg_.workers}};
            body << table.to_json(meta).dump(2) << '\n';
        } else {
            body << "# " << semantic_fields(cfg_).dump() << '\n';
            table.write_csv(body);
        }
        if (cfg_.out.empty()) {
            std::cout << body.str();
            return;
        }
        std::ofstream out(cfg_.out, std::ios::trunc);
        if (!out) throw ResourceError("cannot open output file " + cfg_.out);
        out << body.str();
    }

    bool tabular() const { return !cfg_.out.empty() || app_.count("--format") > 0; }

    std::string cache_file(const std::string& stem, std::uint64_t x) const {
        std::filesystem::create_directories(cfg_.cache);
        return (std::filesystem::path(cfg_.cache) / (stem + "_" + std::to_string(x) + ".stav")).string();
    }

    quadforms::ClassNumberTable class_numbers(std::uint64_t x) const {
        if (!cfg_.cache.empty()) {
            const auto path = verify::cache_path(cfg_.cache, x);
            if (std::filesystem::exists(path)) return io::read_class_numbers(path, x);
            auto table = quadforms::h_table(x);
            std::filesystem::create_directories(cfg_.cache);
            io::write_class_numbers(path, table);
            return table;
        }
        return quadforms::h_table(x);
    }

    int sieve() {
        const auto primes = numthy::sieve_primes(cfg_.x);
        if (!cfg_.cache.empty()) io::write_primes(cache_file("primes", cfg_.x), primes);
        if (tabular()) {
            io::Table t({"p", "log_p"});
            for (const auto& e : primes) t.add_row({e.p, e.logp});
            emit(t);
        } else {
            std::printf("x=%llu primes=%zu\n", static_cast<unsigned long long>(cfg_.x), primes.size());
        }
        return 0;
    }

    int trace() {
        const curves::CurveParams E{cfg_.a, cfg_.b};
        auto one = [&](std::uint64_t p) {
            return backend() == curves::Backend::naive ? curves::trace_naive(E, p) : curves::trace_bsgs(E, p);
        };
        if (app_.count("--p")) {
            if (!numthy::is_prime(cfg_.p)) throw DomainError("p=" + std::to_string(cfg_.p) + " is not prime");
            const auto t = one(cfg_.p);
            if (tabular()) {
                emit(io::trace_table({{t.p, E.a, E.b, t.lambda}}));
            } else {
                std::printf("p=%llu a=%lld b=%lld lambda=%lld\n", static_cast<unsigned long long>(t.p),
                            static_cast<long long>(E.a), static_cast<long long>(E.b), static_cast<long long>(t.lambda));
            }
            return 0;
        }
        std::vector<io::TraceRecord> records;
        for (const auto& e : numthy::sieve_primes(cfg_.x))
            if (E.good_reduction(e.p)) records.push_back({e.p, E.a, E.b, one(e.p).lambda});
        if (!cfg_.cache.empty()) io::write_traces(cache_file("traces", cfg_.x), records);
        emit(io::trace_table(records));
        return 0;
    }

    int classno() {
        const quadforms::Discriminant D(cfg_.D);
        const auto mode = cfg_.mode == "lseries" ? quadforms::ClassNumberMode::lseries : quadforms::ClassNumberMode::forms;
        const auto H = quadforms::kronecker_class_number(D, mode);
        if (tabular()) {
            io::Table t({"D", "H"});
            t.add_row({cfg_.D, H});
            emit(t);
        } else {
            std::printf("D=%lld H=%llu\n", static_cast<long long>(cfg_.D), static_cast<unsigned long long>(H));
        }
        return 0;
    }

    int htable() {
        const auto table = class_numbers(cfg_.x);
        if (tabular()) {
            emit(io::class_number_table(table));
        } else {
            std::printf("x=%llu records=%zu\n", static_cast<unsigned long long>(cfg_.x), table.size());
        }
        return 0;
    }

    int mainterm() {
        const auto iv = window();
        const double m = cfg_.x < 2 ? 0.0 : family::main_term(cfg_.x, iv, class_numbers(cfg_.x));
        const double xF = family::expected_theta(cfg_.x, iv);
        if (tabular()) {
            io::Table t({"x", "alpha", "beta", "main_term", "xF"});
            t.add_row({cfg_.x, iv.alpha, iv.beta, m, xF});
            emit(t);
        } else {
            std::printf("x=%llu alpha=%s beta=%s main_term=%s xF=%s\n", static_cast<unsigned long long>(cfg_.x),
                        json(iv.alpha).dump().c_str(), json(iv.beta).dump().c_str(),
                        io::Table::format_real(m).c_str(), io::Table::format_real(xF).c_str());
        }
        return 0;
    }

    int experiment() {
        const auto box = family::BoxSpec::make(cfg_.A, cfg_.B);
        const auto iv = window();
        if (cfg_.path != "per_curve") {
            auto by_residue = family::sweep_per_residue(box, iv, cfg_.x, sweep_options());
            if (cfg_.path == "both") family::check_paths_agree(family::sweep_per_curve(box, iv, cfg_.x, sweep_options()), by_residue);
            if (app_.got_subcommand("average")) {
                auto t = io::prime_count_table(by_residue.primes, by_residue.counts);
                if (tabular()) {
                    emit(t);
                } else {
                    std::printf("average=%s\n", io::Table::format_real(by_residue.average()).c_str());
                }
                return 0;
            }
            if (cfg_.path == "per_residue")
                throw DomainError("per_residue path computes the average only; second moments need per-curve Theta");
        }
        const auto sweep = family::sweep_per_curve(box, iv, cfg_.x, sweep_options());
        family::ExperimentReport rep;
        rep.x = cfg_.x;
        rep.box = box;
        rep.iv = iv;
        rep.rel_tol = cfg_.rel_tol;
        rep.average = sweep.average();
        rep.main_term = cfg_.x < 2 ? 0.0 : family::main_term(cfg_.x, iv, class_numbers(cfg_.x));
        rep.xF = family::expected_theta(cfg_.x, iv);
        rep.second_moment = family::second_moment(sweep.theta, box, rep.xF).direct;
        rep.exceptional_count = family::exceptional_count(sweep.theta, rep.xF, rep.rel_tol);
        auto t = io::family_table();
        io::add_report(t, rep);
        emit(t);
        return 0;
    }

    int kr() {
        const auto primes = numthy::sieve_primes(cfg_.cutoff);
        auto t = io::constants_table();
        if (cfg_.r < 1) throw DomainError("--r must be positive");
        io::add_constant(t, static_cast<std::uint64_t>(cfg_.r), lconstants::k_r(static_cast<std::uint64_t>(cfg_.r), primes, cfg_.cutoff));
        emit(t);
        return 0;
    }

    int cfr() {
        if (cfg_.r < 1) throw DomainError("--r must be positive");
        if (app_.count("--n")) {
            const auto c = lconstants::c_f_r(cfg_.n, cfg_.f, cfg_.r);
            if (tabular()) {
                io::Table t({"n", "f", "r", "c"});
                t.add_row({cfg_.n, cfg_.f, cfg_.r, c});
                emit(t);
            } else {
                std::printf("n=%lld f=%lld r=%lld c=%lld\n", static_cast<long long>(cfg_.n),
                            static_cast<long long>(cfg_.f), static_cast<long long>(cfg_.r), static_cast<long long>(c));
            }
            return 0;
        }
        const auto r = static_cast<std::uint64_t>(cfg_.r);
        const double S = lconstants::partial_sum_S(cfg_.U, cfg_.V, r);
        const auto K = lconstants::k_r(r, cfg_.cutoff);
        io::Table t({"U", "V", "r", "S", "K_r", "difference"});
        t.add_row({cfg_.U, cfg_.V, r, S, K.value, S - K.value});
        emit(t);
        return 0;
    }

    int bdh() {
        const double x = static_cast<double>(cfg_.x);
        if (app_.count("--q")) {
            const progressions::APWindow w{x, cfg_.y, cfg_.q, cfg_.a};
            auto t = io::progression_table();
            t.add_row({cfg_.q, cfg_.a, progressions::theta_ap(w), progressions::e_ap(w)});
            emit(t);
            return 0;
        }
        auto t = io::bdh_table();
        t.add_row({cfg_.Q, cfg_.y, progressions::bdh_moment(x, cfg_.y, cfg_.Q, cfg_.workers)});
        emit(t);
        return 0;
    }

    int verify() {
        const auto suite = cfg_.suite == "exact"         ? verify::Suite::exact
                           : cfg_.suite == "statistical" ? verify::Suite::statistical
                                                         : verify::Suite::all;
        verify::Verifier v({cfg_.workers, cfg_.cache});
        if (!cfg_.cache.empty()) {
            // Validate every class-number cache present before using any of them.
            for (const auto& entry : std::filesystem::directory_iterator(cfg_.cache)) {
                const auto name = entry.path().filename().string();
                if (name.rfind("htable_", 0) != 0 || entry.path().extension() != ".stav") continue;
                const auto x = std::stoull(name.substr(7, name.size() - 12));
                (void)verify::verified_class_number_cache(entry.path().string(), x);
            }
        }
        const bool ok = verify::run_suite(v, suite, [](const verify::CheckResult& r) {
            std::printf("%s\n", verify::format_result(r).c_str());
            std::fflush(stdout);
        });
        if (suite != verify::Suite::exact) {
            std::printf("x,main_term/xF\n");
            for (const auto& [x, ratio] : v.main_term_ratios())
                std::printf("%llu,%s\n", static_cast<unsigned long long>(x), io::Table::format_real(ratio).c_str());
        }
        if (!ok) {
            report_error("consistency", "verification failed");
            return 2;
        }
        return 0;
    }

    CLI::App app_;
    RunConfig cfg_;
    std::map<std::string, std::function<void(const json&)>> setters_;
    std::function<int()> action_;
};

}  // namespace

int main(int argc, char** argv) { return Cli().run(argc, argv); }
