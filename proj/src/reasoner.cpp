// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/reasoner.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/prover.hpp"

#include <sstream>

namespace dyngeo {

Json step_to_json(const StepOutput& step) {
    return Json{{"reasoning", step.reasoning}, {"action", action_to_json(step.action)}};
}

std::string serialize_step(const StepOutput& step) { return canonical_dump(step_to_json(step)); }

StepOutput step_from_json(const Json& j) {
    auto raw = [&] { return j.dump(); };
    if (!j.is_object()) throw ProtocolError("step must be a JSON object", raw());
    if (j.size() != 2 || !j.contains("reasoning") || !j.contains("action"))
        throw ProtocolError("step must have exactly the keys 'reasoning' and 'action'", raw());
    if (!j["reasoning"].is_string() || j["reasoning"].get<std::string>().empty())
        throw ProtocolError("'reasoning' must be a nonempty string", raw());
    try {
        return StepOutput{j["reasoning"].get<std::string>(), action_from_json(j["action"])};
    } catch (const ActionSchemaError& e) {
        throw ProtocolError(std::string("bad action: ") + e.what(), raw());
    }
}

StepOutput parse_step(std::string_view text) {
    Json j;
    try {
        j = parse_json(text);
    } catch (const SyntaxError& e) {
        throw ProtocolError(std::string("not JSON: ") + e.what(), std::string(text));
    }
    try {
        return step_from_json(j);
    } catch (const ProtocolError& e) {
        throw ProtocolError(e.what(), std::string(text));
    }
}

Json request_json(const ReasonerInput& input, const std::string& svg) {
    Json history = Json::array();
    for (const auto& s : input.history) history.push_back(step_to_json(s));
    return Json{{"problem_text", input.problem_text},
                {"logic_form", logic_form_to_json(input.current_form)},
                {"svg", svg},
                {"history", std::move(history)},
                {"step_index", input.step_index}};
}

// ---- scripted ---------------------------------------------------------------------

std::unique_ptr<ScriptedReasoner> ScriptedReasoner::from_file(const std::string& path) {
    auto text = read_text_file(path);
    std::vector<std::string> steps;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        Json arr;
        try {
            arr = parse_json(text);
        } catch (const SyntaxError& e) {
            throw DataError(path + ": " + e.what());
        }
        for (const auto& s : arr) steps.push_back(s.dump());
    } else {
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            if (line.find_first_not_of(" \t\r") != std::string::npos) steps.push_back(line);
    }
    return std::make_unique<ScriptedReasoner>(std::move(steps));
}

std::unique_ptr<ScriptedReasoner> ScriptedReasoner::from_steps(const std::vector<StepOutput>& steps) {
    std::vector<std::string> raw;
    for (const auto& s : steps) raw.push_back(serialize_step(s));
    return std::make_unique<ScriptedReasoner>(std::move(raw));
}

StepOutput ScriptedReasoner::next_step(const ReasonerInput& input) {
    if (input.step_index >= steps_.size())
        throw ReasonerExhausted("script has " + std::to_string(steps_.size()) + " steps");
    return parse_step(steps_[input.step_index]);
}

StepOutput AbstainReasoner::next_step(const ReasonerInput&) { throw ReasonerExhausted("abstaining"); }

// ---- rule prover ------------------------------------------------------------------

namespace {

std::string explain(const FactSet& facts, const std::vector<std::size_t>& support) {
    std::string out;
    for (auto i : support) {
        if (!out.empty()) out += "; ";
        out += facts[i].describe() + " (" + facts[i].provenance.rule + ")";
    }
    return out;
}

}  // namespace

StepOutput RuleReasoner::next_step(const ReasonerInput& input) {
    const auto& lf = input.current_form;
    std::optional<Goal> goal;
    try {
        goal = goal_of(lf);
    } catch (const SchemaError& e) {
        throw ReasonerExhausted(std::string("unreadable goal: ") + e.what());
    }
    if (!goal) throw ReasonerExhausted("the form has no goal annotation");

    auto facts = derive_facts(lf);
    if (auto ans = evaluate_goal(lf, *goal, facts)) {
        std::string why = "Goal '" + goal->to_string() + "' follows from " + explain(facts, ans->support) + ".";
        return {why, Answer{ans->answer}};
    }
    auto ranked = rank_constructions(lf, *goal, facts);
    if (ranked.empty()) throw ReasonerExhausted("no construction applies");
    const auto& best = ranked.front();
    std::string why = "Construct " + serialize_action(best.action) + ": it adds " + std::to_string(best.new_facts) +
                      " facts" + (best.closes_goal ? " and settles the goal." : ".");
    return {why, best.action};
}

}  // namespace dyngeo
