// cctailor: turn a streaming requirement into a customized congestion
// control program, score it in the embedded network simulator, and iterate
// until it satisfies the derived requirement set.

#include "CLI11.hpp"

#include "cct/cca/dynamics.hpp"
#include "cct/cca/source.hpp"
#include "cct/errors.hpp"
#include "cct/eval/evaluator.hpp"
#include "cct/manifest.hpp"
#include "cct/refine/refinery.hpp"
#include "cct/report/report.hpp"
#include "cct/requirements.hpp"
#include "cct/util.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cct;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2; // also: refinement exhausted, deploy refused
constexpr int kExitBackend = 3;

struct ModelArgs {
    std::string text;
    double upload_mbps = 0.0;
    double share = 0.5;
    double rtt_ms = -1.0;
    std::string out = "requirements.txt";
};

struct GenerateArgs {
    std::string requirements_path;
    std::string base = "cubic";
    std::string backend = "reference";
    int pool_size = 5;
    double temperature = 0.5;
    int max_iterations = 5;
    std::string prompt_mode = "cot";
    uint64_t seed = 1;
    bool dump_prompts = false;
    std::string fault_plan;
    std::string out_dir;
    std::string model_id = "chat-default";
    std::string llm_url = "http://127.0.0.1:8080/v1/chat/completions";
    std::string api_key_env = "CCT_API_KEY";
    std::vector<std::string> replay_fixtures;
};

struct EvaluateArgs {
    std::string candidate_path;
    std::string requirements_path;
    uint64_t seed = 1;
    std::string tag;
    std::string check_backend = "simulated";
};

struct ReportArgs {
    std::string run_dir;
};

struct DeployArgs {
    std::string candidate_path;
    std::string requirements_path;
    uint64_t seed = 1;
    std::string out;
};

void parse_fault_plan(const std::string& text, refine::RefinerConfig& cfg) {
    if (text.empty()) return;
    for (const auto& entry : split(text, ',')) {
        auto pos = entry.find(':');
        if (pos == std::string::npos)
            throw InvalidSpec("fault plan entries look like INDEX:FLAG[+FLAG...], got '" + entry +
                              "'");
        std::string index = trim(entry.substr(0, pos));
        uint32_t flags = 0;
        for (const auto& name : split(entry.substr(pos + 1), '+'))
            flags |= cca::fault_from_string(trim(name));
        if (index == "rest" || index == "*")
            cfg.fault_plan_rest = flags;
        else
            cfg.fault_plan[std::stoi(index)] = flags;
    }
}

std::string default_run_dir(uint64_t seed) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    return "runs/" + std::string(stamp) + "-seed" + std::to_string(seed);
}

// Collects relative paths of everything written under the run directory.
struct ArtifactWriter {
    fs::path root;
    std::vector<std::string> written;

    void put(const std::string& rel, const std::string& content) {
        fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        write_file(p.string(), content);
        written.push_back(rel);
    }
};

void persist_candidates(ArtifactWriter& w, const std::vector<refine::Candidate>& candidates) {
    for (const auto& c : candidates) {
        w.put("candidates/" + c.id + ".c", c.source_text);
        if (c.report) w.put("reports/" + c.id + ".txt", eval::report_to_text(*c.report));
    }
}

void persist_manifest(ArtifactWriter& w, const RequirementSet& reqs, cca::CcaId base,
                      const refine::RefinerConfig& cfg, const refine::RunHistory& history) {
    RunManifest m;
    m.requirements = reqs;
    m.base = base;
    m.backend = cfg.backend;
    m.model_id = cfg.model_id;
    m.temperature = cfg.temperature;
    m.pool_size = cfg.pool_size;
    m.max_iterations = cfg.max_iterations;
    m.prompt_mode = cfg.prompt_mode;
    m.seed = cfg.seed;
    m.status = history.status;
    m.best_candidate_id = history.best_id;
    m.total_usd = history.total_usd;
    m.artifact_paths = w.written;
    std::sort(m.artifact_paths.begin(), m.artifact_paths.end());
    w.put("manifest.txt", manifest_to_text(m));
}

int cmd_model(const ModelArgs& a) {
    StreamingSpec spec = parse_streaming_spec(a.text);
    HomeNetwork net;
    net.upload_mbps = a.upload_mbps;
    net.share_fraction = a.share;
    if (a.rtt_ms > 0) net.nominal_rtt_ms = a.rtt_ms;
    RequirementSet reqs = build_requirements(spec, net);
    std::cout << "R1 minimum throughput = " << format_double(reqs.r1_min_mbps) << " Mbps\n"
              << "R2 maximum throughput = " << format_double(reqs.r2_max_mbps) << " Mbps\n"
              << "R3 loss threshold = " << format_double(reqs.r3_loss_threshold * 100.0)
              << " %\n";
    write_file(a.out, requirements_to_text(reqs));
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

int cmd_generate(const GenerateArgs& a) {
    RequirementSet reqs = requirements_from_text(read_file(a.requirements_path));
    cca::CcaId base = cca::cca_from_string(a.base);

    refine::RefinerConfig cfg;
    cfg.backend = refine::backend_from_string(a.backend);
    cfg.model_id = a.model_id;
    cfg.temperature = a.temperature;
    cfg.pool_size = a.pool_size;
    cfg.max_iterations = a.max_iterations;
    cfg.prompt_mode = prompt::mode_from_string(a.prompt_mode);
    cfg.seed = a.seed;
    parse_fault_plan(a.fault_plan, cfg);

    std::unique_ptr<refine::ChatTransport> transport;
    if (cfg.backend == refine::Backend::LLM) {
        if (!a.replay_fixtures.empty())
            transport = std::make_unique<refine::ReplayTransport>(a.replay_fixtures);
        else
            transport = std::make_unique<refine::HttpChatTransport>(a.llm_url, a.api_key_env);
        cfg.transport = transport.get();
    }

    ArtifactWriter w{a.out_dir.empty() ? fs::path(default_run_dir(a.seed)) : fs::path(a.out_dir),
                     {}};
    if (a.dump_prompts && cfg.backend == refine::Backend::LLM) {
        cfg.exchange_sink = [&w](const std::string& id, int turn, const refine::ChatRequest& req,
                                 const refine::ChatResponse& res) {
            std::string body;
            for (const auto& m : req.messages)
                body += "[" + m.role + "]\n" + m.content + "\n";
            w.put("exchanges/" + id + ".turn" + std::to_string(turn) + ".req.txt", body);
            w.put("exchanges/" + id + ".turn" + std::to_string(turn) + ".res.txt", res.text);
        };
    }

    w.put("requirements.txt", requirements_to_text(reqs));
    try {
        refine::RunOutcome out = refine::run_loop(reqs, base, cfg);
        if (a.dump_prompts) w.put("prompt.txt", out.prompt.render());
        persist_candidates(w, out.candidates);
        w.put("history.txt", refine::history_to_text(out.history));
        persist_manifest(w, reqs, base, cfg, out.history);
        std::cout << refine::history_to_text(out.history) << "run dir: " << w.root.string()
                  << "\n";
        if (out.history.status != refine::RunStatus::SUCCEEDED) {
            std::cerr << "no candidate reached score 100 within "
                      << cfg.max_iterations << " iterations (best " << out.best.id << " = "
                      << (out.best.report ? out.best.report->score : 0) << ")\n";
            return kExitInfeasible;
        }
        std::cout << "best candidate: " << out.best.id << " (score 100)\n";
        return 0;
    } catch (const refine::RefinerUnavailable& e) {
        persist_candidates(w, e.partial_pool);
        w.put("history.txt", refine::history_to_text(e.partial_history));
        persist_manifest(w, reqs, base, cfg, e.partial_history);
        std::cerr << "backend unavailable: " << e.what() << "\npartial artifacts in "
                  << w.root.string() << "\n";
        return kExitBackend;
    }
}

int cmd_evaluate(const EvaluateArgs& a) {
    RequirementSet reqs = requirements_from_text(read_file(a.requirements_path));
    eval::CandidateInput cand;
    cand.source_text = read_file(a.candidate_path);
    cand.profile = cca::extract_profile(cand.source_text);

    eval::EvalOptions opt;
    opt.seed = a.seed;
    opt.candidate_tag = a.tag.empty() ? fs::path(a.candidate_path).stem().string() : a.tag;
    if (a.check_backend == "native")
        opt.backend = eval::CheckBackend::NATIVE;
    else if (a.check_backend != "simulated")
        throw InvalidSpec("check backend is 'simulated' or 'native'");

    eval::EvalReport report = eval::evaluate(cand, reqs, opt);
    std::cout << eval::report_to_text(report);
    return 0;
}

int cmd_report(const ReportArgs& a) {
    refine::RunHistory history =
        refine::history_from_text(read_file((fs::path(a.run_dir) / "history.txt").string()));

    // Final score per candidate: last occurrence wins across iterations.
    std::map<std::string, int> final_scores;
    for (const auto& row : history.iterations)
        for (const auto& c : row.candidates) final_scores[c.id] = c.score;
    std::vector<int> scores;
    for (const auto& [id, s] : final_scores) scores.push_back(s);

    std::cout << report::distribution_to_table(report::score_cdf(scores)) << "\n";
    int n_max = int(history.iterations.front().candidates.size());
    std::cout << report::curve_to_table(report::pool_size_curve(history, n_max));
    return 0;
}

// The registered algorithm name, taken from the ops .name initializer.
std::string ops_name(const std::string& source) {
    auto pos = source.find(".name = \"");
    if (pos == std::string::npos) return "bpf_custom";
    pos += 9;
    auto end = source.find('"', pos);
    return source.substr(pos, end - pos);
}

int cmd_deploy(const DeployArgs& a) {
    RequirementSet reqs = requirements_from_text(read_file(a.requirements_path));
    eval::CandidateInput cand;
    cand.source_text = read_file(a.candidate_path);
    cand.profile = cca::extract_profile(cand.source_text);

    eval::EvalOptions opt;
    opt.seed = a.seed;
    opt.candidate_tag = fs::path(a.candidate_path).stem().string();
    eval::EvalReport report = eval::evaluate(cand, reqs, opt);
    if (report.score < 100) {
        std::cerr << "refusing to deploy: candidate scores " << report.score
                  << ", deployment requires 100\n";
        for (const auto& f : report.feedback) std::cerr << "  " << f.tag << ": " << f.text << "\n";
        return kExitInfeasible;
    }

    std::string file = fs::path(a.candidate_path).filename().string();
    std::string obj = fs::path(file).stem().string() + ".o";
    std::string name = ops_name(cand.source_text);
    std::string script;
    script += "#!/bin/sh\n";
    script += "# Compiles " + file + " and attaches it as a TCP congestion-control\n";
    script += "# provider via BPF struct_ops.  Review before running; needs root and a\n";
    script += "# kernel with struct_ops support.\n";
    script += "set -eu\n";
    script += "clang -O2 -g -target bpf -c " + file + " -o " + obj + "\n";
    script += "bpftool struct_ops register " + obj + " /sys/fs/bpf/\n";
    script += "sysctl -w net.ipv4.tcp_congestion_control=" + name + "\n";
    script += "echo attached " + name + "\n";
    if (a.out.empty()) {
        std::cout << script;
    } else {
        write_file(a.out, script);
        std::cout << "wrote " << a.out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"customized congestion-control generator"};
    app.require_subcommand(1);

    ModelArgs model_args;
    auto* model = app.add_subcommand("model", "derive the requirement set from answers");
    model->add_option("--text", model_args.text, "streaming requirement, free text")->required();
    model->add_option("--upload", model_args.upload_mbps, "uplink speed in Mbps")->required();
    model->add_option("--share", model_args.share, "uplink fraction the stream may claim");
    model->add_option("--rtt", model_args.rtt_ms, "nominal RTT in ms");
    model->add_option("--out", model_args.out, "requirement file to write");

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "run the generate-evaluate-refine loop");
    gen->add_option("requirements", gen_args.requirements_path, "requirement file")->required();
    gen->add_option("--base", gen_args.base, "base program: reno, cubic, vegas, illinois");
    gen->add_option("--backend", gen_args.backend, "reference or llm");
    gen->add_option("--pool-size", gen_args.pool_size, "candidates per iteration");
    gen->add_option("--temperature", gen_args.temperature, "sampling temperature");
    gen->add_option("--max-iterations", gen_args.max_iterations, "generation rounds");
    gen->add_option("--prompt-mode", gen_args.prompt_mode, "cot or zero-shot");
    gen->add_option("--seed", gen_args.seed, "run seed");
    gen->add_flag("--dump-prompts", gen_args.dump_prompts, "persist prompts and exchanges");
    gen->add_option("--fault-plan", gen_args.fault_plan,
                    "inject defects, e.g. 0:compile_fault,rest:r1_fault");
    gen->add_option("--out-dir", gen_args.out_dir, "run directory (default runs/<stamp>-seed<n>)");
    gen->add_option("--model", gen_args.model_id, "model id for the llm backend");
    gen->add_option("--llm-url", gen_args.llm_url, "chat-completion endpoint");
    gen->add_option("--api-key-env", gen_args.api_key_env, "env var holding the API secret");
    gen->add_option("--replay", gen_args.replay_fixtures,
                    "response fixture files; replays them instead of calling the endpoint");

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "score an existing candidate file");
    evaluate->add_option("candidate", eval_args.candidate_path, "candidate source file")
        ->required();
    evaluate->add_option("--requirements", eval_args.requirements_path, "requirement file")
        ->required();
    evaluate->add_option("--seed", eval_args.seed, "run seed");
    evaluate->add_option("--tag", eval_args.tag, "candidate tag for seed derivation");
    evaluate->add_option("--check-backend", eval_args.check_backend, "simulated or native");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "emit score distribution and pool-size tables");
    report->add_option("run_dir", report_args.run_dir, "run directory from generate")->required();

    DeployArgs deploy_args;
    auto* deploy = app.add_subcommand("deploy", "emit an installation script (never runs it)");
    deploy->add_option("candidate", deploy_args.candidate_path, "candidate source file")
        ->required();
    deploy->add_option("--requirements", deploy_args.requirements_path, "requirement file")
        ->required();
    deploy->add_option("--seed", deploy_args.seed, "run seed");
    deploy->add_option("--out", deploy_args.out, "script path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (model->parsed()) return cmd_model(model_args);
        if (gen->parsed()) return cmd_generate(gen_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
        if (report->parsed()) return cmd_report(report_args);
        if (deploy->parsed()) return cmd_deploy(deploy_args);
    } catch (const InfeasibleRequirements& e) {
        std::cerr << "infeasible: " << e.what()
                  << "\nlower the stream's bitrate or raise the uplink share.\n";
        return kExitInfeasible;
    } catch (const BackendUnavailable& e) {
        std::cerr << "backend unavailable: " << e.what() << "\n";
        return kExitBackend;
    } catch (const UnknownBase& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidSpec& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
