// SPDX-License-Identifier: Apache-2.0
// dyngeo: render, repair, edit and solve geometry diagrams from the shell.
//
// Exit codes: 0 success, 1 usage, 2 data error.

#include "dyngeo/errors.hpp"
#include "dyngeo/executor.hpp"
#include "dyngeo/harness.hpp"
#include "dyngeo/render.hpp"
#include "dyngeo/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

using namespace dyngeo;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

std::set<std::string> split_pins(const std::string& csv) {
    std::set<std::string> pins;
    std::stringstream in(csv);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) pins.insert(item);
    return pins;
}

// A literal JSON action, or a file holding one.
std::string action_text(const std::string& arg) {
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') return arg;
    return read_text_file(arg);
}

Problem pick_problem(const std::string& path, const std::string& id) {
    auto problems = load_problems(path);
    if (problems.empty()) throw DataError(path + ": no problems");
    if (id.empty()) return problems.front();
    for (auto& p : problems)
        if (p.id == id) return p;
    throw DataError(path + ": no problem '" + id + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic geometry diagrams: logic forms, constructions and proofs"};
    app.require_subcommand(1);

    std::string form_path, out_path, pins, action_arg, problems_path, reasoner_spec, trace_dir, problem_id;
    std::size_t max_steps = kDefaultMaxSteps;
    bool parallel = false;

    auto* render = app.add_subcommand("render", "Render a logic form as SVG");
    render->add_option("form", form_path, "Logic form JSON")->required();
    render->add_option("-o,--output", out_path, "Write the SVG here instead of stdout");

    auto* fix = app.add_subcommand("fix", "Repair coordinates so every relation holds");
    fix->add_option("form", form_path, "Logic form JSON")->required();
    fix->add_option("--pin", pins, "Comma-separated labels to hold fixed");
    fix->add_option("-o,--output", out_path, "Write the repaired form here");

    auto* exec = app.add_subcommand("exec", "Apply one action and print the next form");
    exec->add_option("form", form_path, "Logic form JSON")->required();
    exec->add_option("action", action_arg, "Action JSON, literal or file")->required();

    auto* solve_cmd = app.add_subcommand("solve", "Run one problem through a reasoner");
    solve_cmd->add_option("problems", problems_path, "Problem file (JSON lines)")->required();
    solve_cmd->add_option("--reasoner", reasoner_spec, "rules | gold | none | scripted:<file> | http:<url> | pipe:<cmd>")
        ->required();
    solve_cmd->add_option("--id", problem_id, "Problem id (default: the first)");
    solve_cmd->add_option("--max-steps", max_steps, "Step limit")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--trace", trace_dir, "Directory for per-step SVGs and trajectory.json");

    auto* bench = app.add_subcommand("bench", "Score a reasoner on a problem file");
    bench->add_option("problems", problems_path, "Problem file (JSON lines)")->required();
    bench->add_option("--reasoner", reasoner_spec, "Reasoner spec, as for solve")->required();
    bench->add_option("--max-steps", max_steps, "Step limit")->check(CLI::PositiveNumber);
    bench->add_flag("--parallel", parallel, "Run episodes on OpenMP threads");

    auto* stats_cmd = app.add_subcommand("stats", "Count problems by answer type");
    stats_cmd->add_option("problems", problems_path, "Problem file (JSON lines)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    ReasonerFactory factory;
    if (*solve_cmd || *bench) {
        try {
            factory = make_reasoner_factory(reasoner_spec);
        } catch (const SchemaError& e) {
            std::cerr << "dyngeo: " << e.what() << "\n";
            return kUsage;
        } catch (const Error& e) {
            std::cerr << "dyngeo: " << e.what() << "\n";
            return kDataError;
        }
    }

    try {
        if (*render) {
            emit(render_svg(parse_logic_form(read_text_file(form_path))), out_path);
        } else if (*fix) {
            auto result = solve(parse_logic_form(read_text_file(form_path)), split_pins(pins));
            if (!out_path.empty()) write_text_file(out_path, serialize_logic_form(result.form) + "\n");
            std::cout << canonical_dump(result.report.to_json()) << "\n";
        } else if (*exec) {
            auto res = execute(parse_logic_form(read_text_file(form_path)), parse_action(action_text(action_arg)));
            std::cout << serialize_logic_form(res.next_form) << "\n";
        } else if (*solve_cmd) {
            auto problem = pick_problem(problems_path, problem_id);
            auto reasoner = factory(problem);
            RenderHook hook;
            if (!trace_dir.empty()) {
                std::filesystem::create_directories(trace_dir);
                hook = [&](std::size_t k, const LogicForm& frame) {
                    write_text_file((std::filesystem::path(trace_dir) / ("step_" + std::to_string(k) + ".svg")).string(),
                                    render_svg(frame));
                };
            }
            auto t = run_episode(problem, *reasoner, max_steps, hook);
            if (!trace_dir.empty())
                write_text_file((std::filesystem::path(trace_dir) / "trajectory.json").string(),
                                canonical_dump(t.to_json()) + "\n");
            auto r = rewards(t, problem);
            Json summary{{"id", problem.id}, {"steps", t.steps.size()}, {"truncated", t.truncated},
                         {"r_format", r.r_format}, {"r_result", r.r_result}};
            if (t.terminal_answer) summary["answer"] = answer_to_json(*t.terminal_answer);
            if (!t.error_kind.empty()) summary["error"] = Json{{"kind", t.error_kind}, {"message", t.error}};
            std::cout << canonical_dump(summary) << "\n";
        } else if (*bench) {
            auto problems = load_problems(problems_path);
            auto report = parallel ? score_benchmark_parallel(problems, factory, max_steps)
                                   : score_benchmark(problems, factory, max_steps);
            std::cout << report.table(reasoner_spec);
        } else if (*stats_cmd) {
            auto counts = stats(problems_path);
            std::cout << "Numerical " << counts.numerical << "\nRatio " << counts.ratio << "\nDescriptor "
                      << counts.descriptor << "\nTotal " << counts.total() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "dyngeo: " << e.what() << "\n";
        return kDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "dyngeo: " << e.what() << "\n";
        return kDataError;
    }
    return 0;
}
