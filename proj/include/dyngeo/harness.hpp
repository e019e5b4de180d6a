// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/answer.hpp"
#include "dyngeo/logic_form.hpp"
#include "dyngeo/reasoner.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dyngeo {

/// One line of a problem file:
///   {"id":"p1","text":"...","form":{...} | "form_path":"p1.json",
///    "answer_type":"numerical","answer":30,"unit":"degree",
///    "aliases":["..."],"gold_proof":[{"reasoning":..,"action":{..}}, ...]}
/// form_path is relative to the problem file. unit, aliases and gold_proof
/// are optional.
struct Problem {
    std::string id;
    std::string text;
    LogicForm initial_form;
    AnswerType answer_type = AnswerType::Numerical;
    AnswerValue gold_answer;
    std::vector<std::string> aliases;  // extra accepted descriptors
    std::optional<std::vector<StepOutput>> gold_proof;
};

// Throws SchemaError (or DataError for an unreadable form_path).
Problem problem_from_json(const Json& j, const std::string& base_dir = {});
// Throws DataError with the offending line, DuplicateProblemId.
std::vector<Problem> load_problems(const std::string& path);

struct Trajectory {
    std::string problem_id;
    std::vector<LogicForm> frames;  // frames.size() == steps.size() + 1
    std::vector<StepOutput> steps;
    std::optional<AnswerValue> terminal_answer;
    bool truncated = false;  // stopped by the step limit
    bool format_ok = true;   // false after a malformed or unexecutable step
    std::string error_kind;  // "", "protocol", "execution", "exhausted", "timeout", "reasoner"
    std::string error;
    std::string rejected;  // raw reply or action that ended the episode

    Json to_json() const;
};

inline constexpr std::size_t kDefaultMaxSteps = 12;

// Called once per frame, including the initial one.
using RenderHook = std::function<void(std::size_t frame_index, const LogicForm& frame)>;

/// Loops next_step -> execute until an answer, an error, an exhausted
/// reasoner or max_steps reasoner calls. Never throws for reasoner or
/// execution failures; they are recorded in the trajectory.
Trajectory run_episode(const Problem& problem, Reasoner& reasoner, std::size_t max_steps = kDefaultMaxSteps,
                       const RenderHook& hook = {});

// Re-executes every step from frame 0 and compares canonical serializations.
bool frame_chain_holds(const Trajectory& t);

// 1 iff every step parsed and executed.
int r_format(const Trajectory& t);
// 1 iff the answer matches the gold answer of the problem.
int r_result(const std::optional<AnswerValue>& answer, const Problem& problem);
bool answers_match(const AnswerValue& answer, const AnswerValue& gold, const std::vector<std::string>& aliases = {});

struct RewardBreakdown {
    int r_format = 0;
    int r_result = 0;
};
RewardBreakdown rewards(const Trajectory& t, const Problem& problem);

/// Reasoner per problem from a spec string: "rules", "gold" (the
/// problem's own gold proof), "none", "scripted:<file>", "http:<url>" or
/// "pipe:<command>". Throws SchemaError for an unknown spec.
using ReasonerFactory = std::function<std::unique_ptr<Reasoner>(const Problem&)>;
ReasonerFactory make_reasoner_factory(const std::string& spec);

struct ProblemScore {
    std::string id;
    AnswerType type = AnswerType::Numerical;
    RewardBreakdown reward;
    std::size_t steps = 0;
    std::string error_kind;
};

struct Tally {
    std::size_t problems = 0;
    std::size_t correct = 0;
    double accuracy() const { return problems ? 100.0 * static_cast<double>(correct) / static_cast<double>(problems) : 0.0; }
};

struct BenchmarkReport {
    std::vector<ProblemScore> problems;  // input order
    std::map<AnswerType, Tally> by_type;
    Tally total;

    Json to_json() const;
    // Accuracy per answer type and overall, one row.
    std::string table(const std::string& label) const;
};

BenchmarkReport score_benchmark(const std::vector<Problem>& problems, const ReasonerFactory& factory,
                                std::size_t max_steps = kDefaultMaxSteps);
// Episodes spread over OpenMP threads; same report.
BenchmarkReport score_benchmark_parallel(const std::vector<Problem>& problems, const ReasonerFactory& factory,
                                         std::size_t max_steps = kDefaultMaxSteps);

struct TypeCounts {
    std::size_t numerical = 0;
    std::size_t ratio = 0;
    std::size_t descriptor = 0;

    std::size_t total() const { return numerical + ratio + descriptor; }
    Json to_json() const;
    friend bool operator==(const TypeCounts&, const TypeCounts&) = default;
};

/// Counts problems by answer type. Only "id" and "answer_type" are read.
/// Throws DataError, DuplicateProblemId.
TypeCounts stats_text(std::string_view jsonl);
TypeCounts stats(const std::string& path);

}  // namespace dyngeo
