// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/harness.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/executor.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

namespace dyngeo {

namespace {

std::string string_field(const Json& j, const char* key, bool required = true) {
    if (!j.contains(key)) {
        if (required) throw SchemaError(std::string("problem needs '") + key + "'");
        return {};
    }
    if (!j[key].is_string()) throw SchemaError(std::string("'") + key + "' must be a string");
    return j[key].get<std::string>();
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) fn(line_no, line);
        start = end + 1;
    }
}

}  // namespace

// ---- problems ----------------------------------------------------------------------

Problem problem_from_json(const Json& j, const std::string& base_dir) {
    if (!j.is_object()) throw SchemaError("problem must be a JSON object");
    static const std::set<std::string> known{"id",   "text",    "form",    "form_path", "answer_type",
                                             "answer", "unit", "aliases", "gold_proof"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw SchemaError("unexpected problem field '" + key + "'");

    Problem p;
    p.id = string_field(j, "id");
    if (p.id.empty()) throw SchemaError("problem id must be nonempty");
    p.text = string_field(j, "text");

    if (j.contains("form") == j.contains("form_path"))
        throw SchemaError("problem needs exactly one of 'form' and 'form_path'");
    if (j.contains("form")) {
        p.initial_form = logic_form_from_json(j["form"]);
    } else {
        std::filesystem::path path = string_field(j, "form_path");
        if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
        p.initial_form = parse_logic_form(read_text_file(path.string()));
    }

    auto type = answer_type_from_json_name(string_field(j, "answer_type"));
    if (!type) throw SchemaError("unknown answer_type");
    p.answer_type = *type;
    if (!j.contains("answer")) throw SchemaError("problem needs 'answer'");
    p.gold_answer = parse_gold_answer(*type, j["answer"], string_field(j, "unit", false));

    if (j.contains("aliases")) {
        if (!j["aliases"].is_array()) throw SchemaError("'aliases' must be an array");
        for (const auto& a : j["aliases"]) {
            if (!a.is_string()) throw SchemaError("aliases must be strings");
            p.aliases.push_back(a.get<std::string>());
        }
    }
    if (j.contains("gold_proof")) {
        if (!j["gold_proof"].is_array()) throw SchemaError("'gold_proof' must be an array");
        std::vector<StepOutput> steps;
        for (const auto& s : j["gold_proof"]) {
            try {
                steps.push_back(step_from_json(s));
            } catch (const ProtocolError& e) {
                throw SchemaError(std::string("gold proof: ") + e.what());
            }
        }
        p.gold_proof = std::move(steps);
    }
    return p;
}

std::vector<Problem> load_problems(const std::string& path) {
    auto text = read_text_file(path);
    auto base = std::filesystem::path(path).parent_path().string();
    std::vector<Problem> out;
    std::set<std::string> ids;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        Problem p;
        try {
            p = problem_from_json(parse_json(line), base);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const LabelError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const SyntaxError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(p.id).second) throw DuplicateProblemId(p.id);
        out.push_back(std::move(p));
    });
    return out;
}

// ---- episodes -----------------------------------------------------------------------

Json Trajectory::to_json() const {
    Json frames_j = Json::array();
    for (const auto& f : frames) frames_j.push_back(logic_form_to_json(f));
    Json steps_j = Json::array();
    for (const auto& s : steps) steps_j.push_back(step_to_json(s));
    Json j{{"problem_id", problem_id}, {"frames", std::move(frames_j)}, {"steps", std::move(steps_j)},
           {"truncated", truncated},   {"format_ok", format_ok}};
    if (terminal_answer) j["terminal_answer"] = answer_to_json(*terminal_answer);
    if (!error_kind.empty()) {
        j["error"] = Json{{"kind", error_kind}, {"message", error}};
        if (!rejected.empty()) j["error"]["rejected"] = rejected;
    }
    return j;
}

Trajectory run_episode(const Problem& problem, Reasoner& reasoner, std::size_t max_steps, const RenderHook& hook) {
    Trajectory t;
    t.problem_id = problem.id;
    t.frames.push_back(problem.initial_form);
    if (hook) hook(0, t.frames.back());

    auto fail = [&](std::string kind, const std::string& message, std::string rejected = {}) {
        t.error_kind = std::move(kind);
        t.error = message;
        t.rejected = std::move(rejected);
        return t;
    };

    for (std::size_t step = 0; step < max_steps; ++step) {
        ReasonerInput input{problem.text, t.frames.back(), t.steps, t.steps.size()};
        StepOutput out;
        try {
            out = reasoner.next_step(input);
        } catch (const ProtocolError& e) {
            t.format_ok = false;
            return fail("protocol", e.what(), e.raw());
        } catch (const ReasonerExhausted& e) {
            return fail("exhausted", e.what());
        } catch (const Timeout& e) {
            return fail("timeout", e.what());
        } catch (const Error& e) {
            return fail("reasoner", e.what());
        }

        ExecutionResult res;
        try {
            res = execute(t.frames.back(), out.action);
        } catch (const Error& e) {
            t.format_ok = false;
            return fail("execution", e.what(), serialize_step(out));
        }
        t.steps.push_back(std::move(out));
        t.frames.push_back(std::move(res.next_form));
        if (hook) hook(t.frames.size() - 1, t.frames.back());
        if (res.terminal) {
            t.terminal_answer = res.answer;
            return t;
        }
    }
    t.truncated = true;
    return t;
}

bool frame_chain_holds(const Trajectory& t) {
    if (t.frames.size() != t.steps.size() + 1) return false;
    LogicForm current = t.frames.front();
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
        try {
            current = execute(current, t.steps[k].action).next_form;
        } catch (const Error&) {
            return false;
        }
        if (serialize_logic_form(current) != serialize_logic_form(t.frames[k + 1])) return false;
    }
    return true;
}

// ---- rewards --------------------------------------------------------------------

int r_format(const Trajectory& t) { return t.format_ok ? 1 : 0; }

bool answers_match(const AnswerValue& answer, const AnswerValue& gold, const std::vector<std::string>& aliases) {
    if (type_of(answer) != type_of(gold)) return false;
    if (const auto* g = std::get_if<Numerical>(&gold)) {
        auto a = std::get<Numerical>(answer);
        auto gg = *g;
        // A bare number takes the other side's unit.
        if (a.unit.empty()) a.unit = gg.unit;
        if (gg.unit.empty()) gg.unit = a.unit;
        bool angle_a = false, angle_g = false;
        auto va = normalized_value(a, angle_a), vg = normalized_value(gg, angle_g);
        if (!va || !vg || angle_a != angle_g) return false;
        double diff = std::abs(*va - *vg);
        if (std::abs(*vg) < 1e-9) return diff <= 1e-9;
        return diff <= 1e-6 * std::abs(*vg);
    }
    if (const auto* g = std::get_if<Ratio>(&gold)) return std::get<Ratio>(answer) == *g;
    auto text = normalize_descriptor(std::get<Descriptor>(answer).text);
    if (text.empty()) return false;
    if (text == normalize_descriptor(std::get<Descriptor>(gold).text)) return true;
    for (const auto& alias : aliases)
        if (text == normalize_descriptor(alias)) return true;
    return false;
}

int r_result(const std::optional<AnswerValue>& answer, const Problem& problem) {
    if (!answer) return 0;
    return answers_match(*answer, problem.gold_answer, problem.aliases) ? 1 : 0;
}

RewardBreakdown rewards(const Trajectory& t, const Problem& problem) {
    return {r_format(t), r_result(t.terminal_answer, problem)};
}

// ---- reasoner specs ----------------------------------------------------------------

ReasonerFactory make_reasoner_factory(const std::string& spec) {
    auto after = [&](std::string_view prefix) -> std::optional<std::string> {
        if (spec.rfind(prefix, 0) != 0) return std::nullopt;
        return spec.substr(prefix.size());
    };
    if (spec == "rules") return [](const Problem&) { return std::make_unique<RuleReasoner>(); };
    if (spec == "none") return [](const Problem&) { return std::make_unique<AbstainReasoner>(); };
    if (spec == "gold")
        return [](const Problem& p) -> std::unique_ptr<Reasoner> {
            if (!p.gold_proof) return std::make_unique<AbstainReasoner>();
            return ScriptedReasoner::from_steps(*p.gold_proof);
        };
    if (auto file = after("scripted:")) {
        auto script = ScriptedReasoner::from_file(*file);
        auto steps = std::make_shared<std::unique_ptr<ScriptedReasoner>>(std::move(script));
        return [steps](const Problem&) { return std::make_unique<ScriptedReasoner>(**steps); };
    }
    if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
        return [spec](const Problem&) { return std::make_unique<HttpReasoner>(spec); };
    if (auto url = after("http:")) {
        auto full = url->find("://") == std::string::npos ? "http://" + *url : *url;
        return [full](const Problem&) { return std::make_unique<HttpReasoner>(full); };
    }
    if (auto cmd = after("pipe:")) return [cmd = *cmd](const Problem&) { return std::make_unique<PipeReasoner>(cmd); };
    throw SchemaError("unknown reasoner '" + spec + "'");
}

// ---- benchmark ------------------------------------------------------------------

namespace {

ProblemScore score_one(const Problem& p, const ReasonerFactory& factory, std::size_t max_steps) {
    ProblemScore s{p.id, p.answer_type, {}, 0, {}};
    std::unique_ptr<Reasoner> reasoner;
    try {
        reasoner = factory(p);
    } catch (const Error& e) {
        s.error_kind = "reasoner";
        return s;
    }
    auto t = run_episode(p, *reasoner, max_steps);
    s.reward = rewards(t, p);
    s.steps = t.steps.size();
    s.error_kind = t.error_kind;
    return s;
}

BenchmarkReport tally(std::vector<ProblemScore> scores) {
    BenchmarkReport r;
    for (auto type : {AnswerType::Numerical, AnswerType::Ratio, AnswerType::Descriptor}) r.by_type[type];
    for (const auto& s : scores) {
        auto& t = r.by_type[s.type];
        ++t.problems;
        ++r.total.problems;
        t.correct += static_cast<std::size_t>(s.reward.r_result);
        r.total.correct += static_cast<std::size_t>(s.reward.r_result);
    }
    r.problems = std::move(scores);
    return r;
}

std::string percent(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

}  // namespace

BenchmarkReport score_benchmark(const std::vector<Problem>& problems, const ReasonerFactory& factory,
                                std::size_t max_steps) {
    std::vector<ProblemScore> scores;
    for (const auto& p : problems) scores.push_back(score_one(p, factory, max_steps));
    return tally(std::move(scores));
}

BenchmarkReport score_benchmark_parallel(const std::vector<Problem>& problems, const ReasonerFactory& factory,
                                         std::size_t max_steps) {
    std::vector<ProblemScore> scores(problems.size());
    const auto n = static_cast<long long>(problems.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) scores[i] = score_one(problems[i], factory, max_steps);
    return tally(std::move(scores));
}

Json BenchmarkReport::to_json() const {
    Json per = Json::array();
    for (const auto& s : problems) {
        Json j{{"id", s.id},
               {"answer_type", std::string(json_name(s.type))},
               {"r_format", s.reward.r_format},
               {"r_result", s.reward.r_result},
               {"steps", s.steps}};
        if (!s.error_kind.empty()) j["error"] = s.error_kind;
        per.push_back(std::move(j));
    }
    Json types = Json::object();
    for (const auto& [type, t] : by_type)
        types[std::string(to_string(type))] = Json{{"problems", t.problems}, {"correct", t.correct}, {"accuracy", t.accuracy()}};
    return Json{{"problems", std::move(per)},
                {"by_type", std::move(types)},
                {"total", Json{{"problems", total.problems}, {"correct", total.correct}, {"accuracy", total.accuracy()}}}};
}

std::string BenchmarkReport::table(const std::string& label) const {
    // "-" for a type with no problems.
    auto acc = [this](AnswerType t) -> std::string {
        auto it = by_type.find(t);
        return it == by_type.end() || it->second.problems == 0 ? "-" : percent(it->second.accuracy());
    };
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-24s %10s %10s %10s %10s\n", "reasoner", "Numerical", "Ratio", "Descriptor", "Overall");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-24s %10s %10s %10s %10s\n", label.c_str(), acc(AnswerType::Numerical).c_str(),
                  acc(AnswerType::Ratio).c_str(), acc(AnswerType::Descriptor).c_str(),
                  percent(total.accuracy()).c_str());
    out += buf;
    return out;
}

// ---- statistics ------------------------------------------------------------------

Json TypeCounts::to_json() const {
    return Json{{"Numerical", numerical}, {"Ratio", ratio}, {"Descriptor", descriptor}, {"Total", total()}};
}

TypeCounts stats_text(std::string_view jsonl) {
    TypeCounts counts;
    std::set<std::string> ids;
    for_each_line(jsonl, [&](std::size_t line_no, std::string_view line) {
        auto where = "line " + std::to_string(line_no) + ": ";
        Json j;
        try {
            j = parse_json(line);
        } catch (const SyntaxError& e) {
            throw DataError(where + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string())
            throw DataError(where + "problem needs a string 'id'");
        if (!j.contains("answer_type") || !j["answer_type"].is_string())
            throw DataError(where + "problem needs a string 'answer_type'");
        auto type = answer_type_from_json_name(j["answer_type"].get<std::string>());
        if (!type) throw DataError(where + "unknown answer_type '" + j["answer_type"].get<std::string>() + "'");
        if (!ids.insert(j["id"].get<std::string>()).second) throw DuplicateProblemId(j["id"].get<std::string>());
        switch (*type) {
        case AnswerType::Numerical: ++counts.numerical; break;
        case AnswerType::Ratio: ++counts.ratio; break;
        case AnswerType::Descriptor: ++counts.descriptor; break;
        }
    });
    return counts;
}

TypeCounts stats(const std::string& path) { return stats_text(read_text_file(path)); }

}  // namespace dyngeo
