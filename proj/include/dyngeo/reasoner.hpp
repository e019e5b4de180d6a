// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/action.hpp"
#include "dyngeo/canonical_json.hpp"
#include "dyngeo/logic_form.hpp"

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dyngeo {

/// One reasoning step: {"reasoning": "...", "action": {...}}, exactly those
/// two keys, reasoning nonempty, action as parse_action accepts it.
struct StepOutput {
    std::string reasoning;
    Action action;

    friend bool operator==(const StepOutput&, const StepOutput&) = default;
};

Json step_to_json(const StepOutput& step);
std::string serialize_step(const StepOutput& step);
// Throws ProtocolError carrying the offending text.
StepOutput step_from_json(const Json& j);
StepOutput parse_step(std::string_view text);

struct ReasonerInput {
    std::string problem_text;
    LogicForm current_form;
    std::vector<StepOutput> history;
    std::size_t step_index = 0;  // == history.size()
};

/// Request body of the wire protocol:
/// {"problem_text":..,"logic_form":{..},"svg":"..","history":[..],"step_index":n}
Json request_json(const ReasonerInput& input, const std::string& svg);

class Reasoner {
public:
    virtual ~Reasoner() = default;
    /// Throws ReasonerExhausted when it has nothing to offer, ProtocolError
    /// or Timeout for a misbehaving remote agent.
    virtual StepOutput next_step(const ReasonerInput& input) = 0;
    virtual std::string name() const = 0;
};

/// Replays raw step documents. Each entry is parsed only when its turn
/// comes, so a malformed entry surfaces as ProtocolError at that step.
class ScriptedReasoner : public Reasoner {
public:
    explicit ScriptedReasoner(std::vector<std::string> raw_steps) : steps_(std::move(raw_steps)) {}
    // A JSON array of steps, or one step per line. Throws DataError.
    static std::unique_ptr<ScriptedReasoner> from_file(const std::string& path);
    static std::unique_ptr<ScriptedReasoner> from_steps(const std::vector<StepOutput>& steps);

    StepOutput next_step(const ReasonerInput& input) override;
    std::string name() const override { return "scripted"; }
    std::size_t size() const { return steps_.size(); }

private:
    std::vector<std::string> steps_;
};

// Never proposes anything.
class AbstainReasoner : public Reasoner {
public:
    StepOutput next_step(const ReasonerInput& input) override;
    std::string name() const override { return "none"; }
};

/// Forward-chaining prover over the form's "goal" annotation: answers when
/// the goal follows from the derived facts, otherwise performs the best
/// ranked auxiliary construction.
class RuleReasoner : public Reasoner {
public:
    StepOutput next_step(const ReasonerInput& input) override;
    std::string name() const override { return "rules"; }
};

/// HTTP POST of request_json to `url`; the response body must be a step.
class HttpReasoner : public Reasoner {
public:
    explicit HttpReasoner(std::string url, std::chrono::milliseconds timeout = default_timeout());
    StepOutput next_step(const ReasonerInput& input) override;
    std::string name() const override { return "http:" + url_; }

    // 120 s unless DYNGEO_REASONER_TIMEOUT gives seconds.
    static std::chrono::milliseconds default_timeout();

private:
    std::string url_;
    std::chrono::milliseconds timeout_;
};

/// Same protocol as newline-delimited JSON over a child process's
/// stdin/stdout. The child is started on first use and lives as long as
/// the reasoner.
class PipeReasoner : public Reasoner {
public:
    explicit PipeReasoner(std::string command, std::chrono::milliseconds timeout = HttpReasoner::default_timeout());
    ~PipeReasoner() override;
    PipeReasoner(const PipeReasoner&) = delete;
    PipeReasoner& operator=(const PipeReasoner&) = delete;

    StepOutput next_step(const ReasonerInput& input) override;
    std::string name() const override { return "pipe:" + command_; }

private:
    void start();
    void stop();

    std::string command_;
    std::chrono::milliseconds timeout_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string pending_;
};

}  // namespace dyngeo
