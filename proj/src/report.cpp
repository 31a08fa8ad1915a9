#include "flowloc/report.hpp"

#include <sstream>

#include <json.hpp>

namespace flowloc {

using json = nlohmann::ordered_json;

namespace {

std::string join_lines(const std::vector<int>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(lines[i]);
  }
  return out;
}

void text_mcs(std::ostringstream& out, const Diagnosis& d) {
  switch (d.mcs_status) {
    case McsStatus::HardUnsat: out << "  mcs: none (no assignment before the condition can force it)\n"; return;
    case McsStatus::Satisfiable: out << "  mcs: none (path constraints are consistent)\n"; return;
    case McsStatus::Ok: break;
  }
  if (d.mcs.empty()) out << "  mcs: none within k_max\n";
  for (std::size_t i = 0; i < d.mcs.size(); ++i) {
    out << "  mcs " << i + 1 << ":\n";
    for (const SuspectRef& s : d.mcs[i].members) {
      out << "    suspect: line " << s.line << " (" << s.formula;
      if (!s.note.empty()) out << "; " << s.note;
      out << ")\n";
    }
  }
}

ConstraintKind kind_from(const std::string& s) {
  for (ConstraintKind k : {ConstraintKind::Input, ConstraintKind::Assignment, ConstraintKind::SyntheticCopy,
                           ConstraintKind::Guard, ConstraintKind::Postcondition}) {
    if (to_string(k) == s) return k;
  }
  throw Error("unknown constraint kind '" + s + "'");
}

McsStatus status_from(const std::string& s) {
  for (McsStatus k : {McsStatus::Ok, McsStatus::HardUnsat, McsStatus::Satisfiable}) {
    if (to_string(k) == s) return k;
  }
  throw Error("unknown mcs status '" + s + "'");
}

CandidateOutcome outcome_from(const std::string& s) {
  for (CandidateOutcome o : {CandidateOutcome::Corrected, CandidateOutcome::Ignored, CandidateOutcome::RejectedMarked,
                             CandidateOutcome::RejectedPrefix, CandidateOutcome::Unreached,
                             CandidateOutcome::OutOfDomain}) {
    if (to_string(o) == s) return o;
  }
  throw Error("unknown outcome '" + s + "'");
}

Branch branch_from(const std::string& s) {
  if (s == "then") return Branch::Then;
  if (s == "else") return Branch::Else;
  throw Error("unknown branch '" + s + "'");
}

DiagnosisKind diagnosis_from(const std::string& s) {
  if (s == to_string(DiagnosisKind::InitialPath)) return DiagnosisKind::InitialPath;
  if (s == to_string(DiagnosisKind::DeviationCorrects)) return DiagnosisKind::DeviationCorrects;
  throw Error("unknown diagnosis kind '" + s + "'");
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "program: " << r.program << "\n";
  out << "counterexample:";
  for (std::size_t i = 0; i < r.counterexample.size(); ++i) {
    out << (i ? ", " : " ") << r.counterexample[i].first << "=" << r.counterexample[i].second;
  }
  out << "\n";
  out << "config: b_cond=" << r.b_cond << ", b_mcs=" << r.b_mcs << ", k_max=" << r.k_max << ", domain=[" << r.lo
      << ", " << r.hi << "]\n";

  for (std::size_t i = 0; i < r.diagnoses.size(); ++i) {
    const Diagnosis& d = r.diagnoses[i];
    out << "\n[" << i + 1 << "] "
        << (d.kind == DiagnosisKind::InitialPath ? "initial path" : "deviation corrects") << "\n";
    out << "  path:";
    if (d.path.empty()) out << " straight line";
    for (std::size_t k = 0; k < d.path.size(); ++k) {
      out << (k ? ", " : " ") << "line " << d.path[k].line << " " << to_string(d.path[k].taken)
          << (d.path[k].deviated ? "*" : "");
    }
    out << "\n  result: " << d.result << "\n";
    for (const DeviationRef& dev : d.deviated) {
      out << "  suspect: line " << dev.line << " (condition " << dev.guard << ", forced "
          << to_string(dev.taken) << ")\n";
    }
    text_mcs(out, d);
  }

  out << "\nexplored:\n";
  if (r.explored.empty()) out << "  none\n";
  for (const CandidateRecord& c : r.explored) {
    out << "  deviate line" << (c.lines.size() > 1 ? "s " : " ") << join_lines(c.lines) << ": "
        << to_string(c.outcome) << ", " << c.solver_checks << " checks\n";
  }

  const Statistics& s = r.statistics;
  out << "\nstatistics:\n";
  out << "  paths explored: " << s.paths_explored << "\n";
  out << "  ignored: " << s.ignored << "\n";
  out << "  rejected (marked): " << s.rejected_marked << "\n";
  out << "  rejected (prefix): " << s.rejected_prefix << "\n";
  out << "  unreached: " << s.unreached << "\n";
  out << "  out of domain: " << s.out_of_domain << "\n";
  out << "  solver checks: " << s.solver_checks << "\n";
  out << "  assertions: " << s.assertions << "\n";
  out << "  propagations: " << s.propagations << "\n";
  out << "  incremental: " << (s.incremental ? "yes" : "no") << "\n";
  return out.str();
}

std::string render_json(const Report& r) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["program"] = r.program;
  json ce = json::object();
  for (const auto& [name, value] : r.counterexample) ce[name] = value;
  doc["counterexample"] = ce;
  doc["config"] = {{"b_cond", r.b_cond},
                   {"b_mcs", r.b_mcs},
                   {"k_max", r.k_max},
                   {"domain", {{"lo", r.lo}, {"hi", r.hi}}}};

  json diagnoses = json::array();
  for (const Diagnosis& d : r.diagnoses) {
    json jd;
    jd["kind"] = to_string(d.kind);
    json path = json::array();
    for (const PathStep& p : d.path) {
      path.push_back({{"decision", p.index}, {"line", p.line}, {"branch", to_string(p.taken)}, {"deviated", p.deviated}});
    }
    jd["path"] = path;
    jd["result"] = d.result;
    json deviated = json::array();
    for (const DeviationRef& dev : d.deviated) {
      deviated.push_back(
          {{"decision", dev.index}, {"line", dev.line}, {"guard", dev.guard}, {"branch", to_string(dev.taken)}});
    }
    jd["deviated"] = deviated;
    jd["mcs_status"] = to_string(d.mcs_status);
    json mcs = json::array();
    for (const McsRef& m : d.mcs) {
      json members = json::array();
      for (const SuspectRef& s : m.members) {
        json js = {{"id", s.id},
                   {"kind", to_string(s.kind)},
                   {"line", s.line},
                   {"path_index", s.path_index},
                   {"formula", s.formula},
                   {"text", s.formula + " @ line " + std::to_string(s.line)}};
        if (!s.note.empty()) js["note"] = s.note;
        members.push_back(js);
      }
      mcs.push_back({{"members", members}});
    }
    jd["mcs"] = mcs;
    diagnoses.push_back(jd);
  }
  doc["diagnoses"] = diagnoses;

  json explored = json::array();
  for (const CandidateRecord& c : r.explored) {
    json devs = json::array();
    for (std::size_t i = 0; i < c.indices.size(); ++i) devs.push_back({{"decision", c.indices[i]}, {"line", c.lines[i]}});
    explored.push_back({{"deviations", devs}, {"outcome", to_string(c.outcome)}, {"solver_checks", c.solver_checks}});
  }
  doc["explored"] = explored;

  const Statistics& s = r.statistics;
  doc["statistics"] = {{"paths_explored", s.paths_explored},
                       {"ignored", s.ignored},
                       {"rejected_marked", s.rejected_marked},
                       {"rejected_prefix", s.rejected_prefix},
                       {"unreached", s.unreached},
                       {"out_of_domain", s.out_of_domain},
                       {"solver_checks", s.solver_checks},
                       {"assertions", s.assertions},
                       {"propagations", s.propagations},
                       {"incremental", s.incremental}};
  return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion) throw Error("unsupported schema_version");
    Report r;
    r.program = doc.at("program").get<std::string>();
    for (const auto& [name, value] : doc.at("counterexample").items()) {
      r.counterexample.emplace_back(name, value.get<int64_t>());
    }
    const json& cfg = doc.at("config");
    r.b_cond = cfg.at("b_cond").get<int>();
    r.b_mcs = cfg.at("b_mcs").get<int>();
    r.k_max = cfg.at("k_max").get<int>();
    r.lo = cfg.at("domain").at("lo").get<int64_t>();
    r.hi = cfg.at("domain").at("hi").get<int64_t>();

    for (const json& jd : doc.at("diagnoses")) {
      Diagnosis d;
      d.kind = diagnosis_from(jd.at("kind").get<std::string>());
      for (const json& p : jd.at("path")) {
        d.path.push_back(PathStep{p.at("decision").get<int>(), p.at("line").get<int>(),
                                  branch_from(p.at("branch").get<std::string>()), p.at("deviated").get<bool>()});
      }
      d.result = jd.at("result").get<int64_t>();
      for (const json& dev : jd.at("deviated")) {
        d.deviated.push_back(DeviationRef{dev.at("decision").get<int>(), dev.at("line").get<int>(),
                                          dev.at("guard").get<std::string>(),
                                          branch_from(dev.at("branch").get<std::string>())});
      }
      d.mcs_status = status_from(jd.at("mcs_status").get<std::string>());
      for (const json& m : jd.at("mcs")) {
        McsRef ref;
        for (const json& s : m.at("members")) {
          ref.members.push_back(SuspectRef{s.at("id").get<int>(), kind_from(s.at("kind").get<std::string>()),
                                           s.at("line").get<int>(), s.at("path_index").get<int>(),
                                           s.at("formula").get<std::string>(), s.value("note", std::string())});
        }
        d.mcs.push_back(std::move(ref));
      }
      r.diagnoses.push_back(std::move(d));
    }

    for (const json& jc : doc.at("explored")) {
      CandidateRecord c;
      for (const json& dev : jc.at("deviations")) {
        c.indices.push_back(dev.at("decision").get<int>());
        c.lines.push_back(dev.at("line").get<int>());
      }
      c.outcome = outcome_from(jc.at("outcome").get<std::string>());
      c.solver_checks = jc.at("solver_checks").get<uint64_t>();
      r.explored.push_back(std::move(c));
    }

    const json& js = doc.at("statistics");
    Statistics& s = r.statistics;
    s.paths_explored = js.at("paths_explored").get<int>();
    s.ignored = js.at("ignored").get<int>();
    s.rejected_marked = js.at("rejected_marked").get<int>();
    s.rejected_prefix = js.at("rejected_prefix").get<int>();
    s.unreached = js.at("unreached").get<int>();
    s.out_of_domain = js.at("out_of_domain").get<int>();
    s.solver_checks = js.at("solver_checks").get<uint64_t>();
    s.assertions = js.at("assertions").get<uint64_t>();
    s.propagations = js.at("propagations").get<uint64_t>();
    s.incremental = js.at("incremental").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace flowloc
