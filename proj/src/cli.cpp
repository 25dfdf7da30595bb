#include "bq/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bq/algo.hpp"
#include "bq/encode.hpp"
#include "bq/fragments.hpp"
#include "bq/oracle.hpp"
#include "bq/surface.hpp"

namespace bq {

namespace fs = std::filesystem;

std::string verdict_string(Report::V v) {
  switch (v) {
    case Report::V::Accept: return "accept";
    case Report::V::Reject: return "reject";
    case Report::V::Found: return "found";
    case Report::V::NotFound: return "not_found";
    case Report::V::Error: return "error";
  }
  return "?";
}

Json report_to_json(const Report& r) {
  return Json{{"command", r.command},
              {"verdict", verdict_string(r.verdict)},
              {"details", r.details},
              {"exit_code", r.exit_code}};
}

std::string report_human(const Report& r) {
  std::ostringstream os;
  os << r.command << ": " << verdict_string(r.verdict) << "\n";
  for (const auto& [k, v] : r.details.items()) {
    if (v.is_string())
      os << "  " << k << ": " << v.get<std::string>() << "\n";
    else if (v.is_number() || v.is_boolean())
      os << "  " << k << ": " << v.dump() << "\n";
  }
  return os.str();
}

namespace {

struct Options {
  bool json = false;
  long fuel = kDefaultAlgoFuel;
  int depth = 16;
  std::string type_override;
  std::string target;
  std::string lemma_id;
  std::string ctx_text;
  std::string fragment;
  std::string system = "kt";
  int size = 0;
  bool terms = false;
  std::vector<std::string> positional;
};

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& w) : std::runtime_error(w) {}
};

long parse_long(const std::string& s) {
  size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw UsageError("not a number: " + s);
  return v;
}

Options parse_options(const std::vector<std::string>& args, size_t start) {
  Options o;
  for (size_t i = start; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto value = [&](const char* flag) -> const std::string& {
      if (i + 1 >= args.size()) throw UsageError(std::string(flag) + " needs a value");
      return args[++i];
    };
    if (a == "--json") o.json = true;
    else if (a == "--fuel") o.fuel = parse_long(value("--fuel"));
    else if (a == "--depth") o.depth = static_cast<int>(parse_long(value("--depth")));
    else if (a == "--type") o.type_override = value("--type");
    else if (a == "--target") o.target = value("--target");
    else if (a == "--id") o.lemma_id = value("--id");
    else if (a == "--ctx") o.ctx_text = value("--ctx");
    else if (a == "--fragment") o.fragment = value("--fragment");
    else if (a == "--system") o.system = value("--system");
    else if (a == "--size") o.size = static_cast<int>(parse_long(value("--size")));
    else if (a == "--terms") o.terms = true;
    else if (!a.empty() && a[0] == '-') throw UsageError("unknown flag " + a);
    else o.positional.push_back(a);
  }
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report error_report(const std::string& command, const std::string& reason,
                    int code = 2) {
  Report r;
  r.command = command;
  r.verdict = Report::V::Error;
  r.details = Json{{"reason", reason}};
  r.exit_code = code;
  return r;
}

Report finish(Report r) {
  r.exit_code = (r.verdict == Report::V::Accept || r.verdict == Report::V::Found)
                    ? 0
                    : (r.verdict == Report::V::Error ? r.exit_code : 1);
  return r;
}

bool algorithmic_system(SystemId s) {
  return s == SystemId::Kt || s == SystemId::Kernel || s == SystemId::Ftop;
}

// --- handlers --------------------------------------------------------------

Report do_sub(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "sub";
  const auto* q = std::get_if<TypeQuery>(&u.payload);
  if (!q) return error_report("sub", "input is not a subtyping query");
  if (!algorithmic_system(u.system))
    return error_report("sub",
                        "no subtyping algorithm for " + to_string(u.system) +
                            "; use sub-decl");
  WfCheck wl = wf_type(u.context, q->lhs, u.system);
  if (!wl.ok) return error_report("sub", "ill-formed lhs: " + wl.detail);
  WfCheck wr = wf_type(u.context, q->rhs, u.system);
  if (!wr.ok) return error_report("sub", "ill-formed rhs: " + wr.detail);

  AlgoOptions opts;
  opts.fuel = o.fuel;
  AlgoResult res = algo_subtype(u.context, q->lhs, q->rhs, opts);
  r.details["system"] = to_string(u.system);
  r.details["lhs"] = render(q->lhs);
  r.details["rhs"] = render(q->rhs);
  r.details["steps"] = res.trace.step_count;
  r.details["fuel_cap"] = res.trace.fuel_cap;
  r.details["fuel_exhausted"] = res.trace.fuel_exhausted;
  if (res.trace.fuel_exhausted) {
    r.verdict = Report::V::Error;
    r.details["reason"] = "fuel exhausted; rejection not established";
    r.exit_code = 2;
    return r;
  }
  if (res.accepted) {
    r.verdict = Report::V::Accept;
    r.details["derivation"] =
        derivation_to_json(*algo_to_declarative(u.system, res.trace));
  } else {
    r.verdict = Report::V::Reject;
    if (res.failed_goal) r.details["failed_goal"] = describe(*res.failed_goal);
  }
  return finish(r);
}

Report do_sub_decl(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "sub-decl";
  const auto* q = std::get_if<TypeQuery>(&u.payload);
  if (!q) return error_report("sub-decl", "input is not a subtyping query");
  SearchResult res;
  try {
    res = search_subtype(u.system, u.context, q->lhs, q->rhs, o.depth);
  } catch (const InvalidInput& e) {
    return error_report("sub-decl", e.what());
  }
  r.details["system"] = to_string(u.system);
  r.details["lhs"] = render(q->lhs);
  r.details["rhs"] = render(q->rhs);
  r.details["depth"] = o.depth;
  r.details["depth_used"] = res.depth_used;
  r.details["nodes_expanded"] = res.nodes_expanded;
  if (res.found()) {
    r.verdict = Report::V::Found;
    r.details["derivation"] = derivation_to_json(*res.derivation);
  } else {
    r.verdict = Report::V::NotFound;
  }
  return finish(r);
}

Report do_min(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "min";
  const auto* q = std::get_if<TermQuery>(&u.payload);
  if (!q) return error_report("min", "input is not a term query");
  if (!algorithmic_system(u.system))
    return error_report("min", "minimal typing runs over kt inputs");
  WfCheck w = wf_term(u.context, q->term, u.system);
  if (!w.ok) return error_report("min", "ill-formed term: " + w.detail);
  AlgoOptions opts;
  opts.fuel = o.fuel;
  MinTypeResult res = minimal_type(u.context, q->term, opts);
  r.details["system"] = to_string(u.system);
  r.details["term"] = render(q->term);
  if (res.fuel_exhausted)
    return error_report("min", "fuel exhausted: " + res.detail);
  if (res.typed) {
    r.verdict = Report::V::Accept;
    r.details["type"] = render(res.type);
    r.details["type_json"] = type_to_json(res.type);
    r.details["derivation"] =
        derivation_to_json(*min_to_declarative(SystemId::Kt, *res.trace));
  } else {
    r.verdict = Report::V::Reject;
    r.details["reason"] = to_string(res.reason) + ": " + res.detail;
  }
  return finish(r);
}

Report do_check(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "check";
  if (const auto* d = std::get_if<DerivationFile>(&u.payload)) {
    Verdict v = check_derivation(u.system, *d->derivation);
    r.details["system"] = to_string(u.system);
    r.details["conclusion"] = describe(d->derivation->conclusion);
    r.details["nodes"] = deriv_nodes(*d->derivation);
    if (v.ok) {
      r.verdict = Report::V::Accept;
    } else {
      r.verdict = Report::V::Reject;
      r.details["reason"] = v.reason;
      r.details["path"] = v.path;
    }
    return finish(r);
  }
  const auto* q = std::get_if<TermQuery>(&u.payload);
  if (!q) return error_report("check", "input is not a term query or derivation");
  if (!algorithmic_system(u.system))
    return error_report("check", "typechecking runs over kt inputs");
  TypePtr target = q->ascription;
  if (!o.type_override.empty()) {
    try {
      target = parse_type(o.type_override, u.system);
    } catch (const std::exception& e) {
      return error_report("check", e.what());
    }
  }
  if (!target) return error_report("check", "no target type (ascription or --type)");
  WfCheck w = wf_term(u.context, q->term, u.system);
  if (!w.ok) return error_report("check", "ill-formed term: " + w.detail);
  WfCheck wt = wf_type(u.context, target, u.system);
  if (!wt.ok) return error_report("check", "ill-formed type: " + wt.detail);
  AlgoOptions opts;
  opts.fuel = o.fuel;
  TypecheckResult res = typecheck(u.context, q->term, target, opts);
  r.details["system"] = to_string(u.system);
  r.details["term"] = render(q->term);
  r.details["type"] = render(target);
  if (res.fuel_exhausted) return error_report("check", "fuel exhausted: " + res.reason);
  if (res.accepted) {
    r.verdict = Report::V::Accept;
    r.details["minimal_type"] = render(res.minimal);
    r.details["certificate"] = derivation_to_json(*res.certificate);
  } else {
    r.verdict = Report::V::Reject;
    r.details["reason"] = res.reason;
  }
  return finish(r);
}

Report do_encode(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "encode";
  if (!algorithmic_system(u.system))
    return error_report("encode", "encoding is defined on kt inputs");
  r.details["system"] = to_string(u.system);
  try {
    if (const auto* q = std::get_if<TypeQuery>(&u.payload)) {
      Context ectx = encode_judgment_context(u.context);
      TypePtr lhs = encode_in_context(u.context, q->lhs);
      TypePtr rhs = encode_in_context(u.context, q->rhs);
      r.details["context"] = render(ectx);
      r.details["lhs"] = render(lhs);
      r.details["rhs"] = render(rhs);
      r.details["unit"] = "system fwedge;\n" + render(ectx) + "\nsub " +
                          render(lhs) + " <: " + render(rhs) + "\n";
    } else if (const auto* q = std::get_if<TermQuery>(&u.payload)) {
      if (!o.terms && !q->ascription)
        r.details["note"] = "term payload; encoding terms";
      TermPtr t = encode_term(q->term);
      r.details["term"] = render(t);
      r.details["term_json"] = term_to_json(t);
      if (q->ascription) r.details["type"] = render(encode_type(q->ascription));
    } else {
      return error_report("encode", "nothing to encode in a derivation file");
    }
  } catch (const InvalidInput& e) {
    return error_report("encode", e.what());
  }
  r.verdict = Report::V::Accept;
  return finish(r);
}

// Leading `--` comment lines let instance files carry corpus headers.
std::string strip_leading_comments(const std::string& text) {
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (eol == std::string::npos ? text.size() : eol) - pos);
    size_t ws = line.find_first_not_of(" \t\r");
    if (ws != std::string_view::npos && line.substr(ws, 2) != "--") break;
    pos = eol == std::string::npos ? text.size() : eol + 1;
  }
  return text.substr(pos);
}

Report do_lemma(const Options& o) {
  Report r;
  r.command = "lemma";
  if (o.positional.size() != 1)
    return error_report("lemma", "expected exactly one instance file");
  Json j;
  try {
    j = Json::parse(strip_leading_comments(read_file(o.positional[0])));
  } catch (const std::exception& e) {
    return error_report("lemma", std::string("bad instance file: ") + e.what());
  }
  LemmaInstance inst;
  try {
    std::string id = o.lemma_id.empty() ? j.at("lemma").get<std::string>()
                                        : o.lemma_id;
    auto lem = lemma_from_string(id);
    if (!lem) return error_report("lemma", "unknown lemma id " + id);
    inst.lemma = *lem;
    if (j.contains("ctx")) inst.ctx = ctx_from_json(j.at("ctx"));
    if (j.contains("var")) inst.var = j.at("var").get<std::string>();
    if (j.contains("fresh")) inst.fresh = j.at("fresh").get<std::string>();
    for (const auto& [k, v] : j.at("bindings").items())
      inst.bindings[k] = type_from_json(v);
  } catch (const std::exception& e) {
    return error_report("lemma", std::string("bad instance: ") + e.what());
  }
  LemmaReport rep;
  try {
    rep = verify_lemma_instance(inst, o.depth);
  } catch (const InvalidInput& e) {
    return error_report("lemma", e.what());
  }
  r.details["lemma"] = to_string(inst.lemma);
  r.details["depth"] = o.depth;
  Json premises = Json::array();
  for (const auto& p : rep.premises) {
    premises.push_back(Json{{"judgment", describe(p.judgment)},
                            {"found", p.result.found()},
                            {"depth_used", p.result.depth_used},
                            {"nodes_expanded", p.result.nodes_expanded}});
  }
  r.details["premises"] = premises;
  if (rep.conclusion) {
    r.details["conclusion"] =
        Json{{"judgment", describe(rep.conclusion->judgment)},
             {"found", rep.conclusion->result.found()},
             {"depth_used", rep.conclusion->result.depth_used},
             {"nodes_expanded", rep.conclusion->result.nodes_expanded}};
  }
  switch (rep.status) {
    case LemmaReport::Status::Verified:
      r.verdict = Report::V::Found;
      break;
    case LemmaReport::Status::PremiseNotEstablished:
      r.verdict = Report::V::NotFound;
      r.details["reason"] = "premise not established";
      break;
    case LemmaReport::Status::ConclusionNotFound:
      r.verdict = Report::V::NotFound;
      r.details["reason"] = "conclusion not found within depth";
      break;
  }
  return finish(r);
}

Report do_classify(const SourceUnit& u) {
  Report r;
  r.command = "classify";
  auto flags_json = [](const FragmentFlags& f) {
    return Json{{"kernel", f.is_kernel},
                {"ftop", f.is_ftop},
                {"minimal_for_ftop", f.is_minimal_for_ftop}};
  };
  if (const auto* q = std::get_if<TypeQuery>(&u.payload)) {
    r.details["lhs"] = flags_json(classify_type(q->lhs));
    r.details["rhs"] = flags_json(classify_type(q->rhs));
  } else if (const auto* q = std::get_if<TermQuery>(&u.payload)) {
    r.details["term"] = flags_json(classify_term(q->term));
    if (q->ascription) r.details["type"] = flags_json(classify_type(q->ascription));
  } else {
    return error_report("classify", "nothing to classify in a derivation file");
  }
  r.verdict = Report::V::Accept;
  return finish(r);
}

Report do_elaborate(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "elaborate";
  const auto* q = std::get_if<TermQuery>(&u.payload);
  if (!q) return error_report("elaborate", "input is not a term query");
  TypePtr target = q->ascription;
  if (!o.type_override.empty()) {
    try {
      target = parse_type(o.type_override, u.system);
    } catch (const std::exception& e) {
      return error_report("elaborate", e.what());
    }
  }
  if (!target)
    return error_report("elaborate", "no target type (ascription or --type)");
  r.details["target"] = o.target;
  try {
    DerivPtr d;
    SystemId check_sys;
    if (o.target == "ftop") {
      d = elaborate_ftop_typing(u.context, q->term, target);
      check_sys = SystemId::Ftop;
    } else if (o.target == "kernel") {
      d = elaborate_kernel(u.context, q->term, target);
      check_sys = SystemId::Kernel;
    } else {
      return error_report("elaborate", "--target must be ftop or kernel");
    }
    Verdict v = check_typing_derivation(check_sys, *d);
    r.details["validated"] = v.ok;
    r.details["derivation"] = derivation_to_json(*d);
    if (!v.ok) {
      r.verdict = Report::V::Error;
      r.details["reason"] = "internal: elaborated derivation failed to check: " + v.reason;
      r.exit_code = 3;
      return r;
    }
    r.verdict = Report::V::Accept;
  } catch (const PreconditionViolated& e) {
    r.verdict = Report::V::Reject;
    r.details["reason"] = e.which;
  }
  return finish(r);
}

Report do_enum(const Options& o) {
  Report r;
  r.command = "enum";
  if (o.size < 1) return error_report("enum", "--size must be at least 1");
  auto sys = system_from_string(o.system);
  if (!sys) return error_report("enum", "unknown system " + o.system);
  Context ctx;
  if (!o.ctx_text.empty()) {
    try {
      ctx = parse_context(o.ctx_text, *sys);
    } catch (const std::exception& e) {
      return error_report("enum", e.what());
    }
  }
  std::optional<FragmentFilter> filter;
  if (!o.fragment.empty()) {
    filter = fragment_from_string(o.fragment);
    if (!filter) return error_report("enum", "unknown fragment " + o.fragment);
  }
  std::vector<TypePtr> types = enumerate_types(ctx, o.size, *sys, filter);
  Json arr = Json::array();
  for (TypePtr t : types) arr.push_back(render(t));
  r.details["count"] = types.size();
  r.details["types"] = arr;
  r.verdict = Report::V::Accept;
  return finish(r);
}

Report do_normalize(const SourceUnit& u, const Options& o) {
  Report r;
  r.command = "normalize";
  const auto* q = std::get_if<TermQuery>(&u.payload);
  if (!q) return error_report("normalize", "input is not a term query");
  r.details["term"] = render(q->term);
  r.details["beta_normal_input"] = is_beta_normal(q->term);
  try {
    TermPtr nf = beta_normalize(q->term, o.fuel);
    r.details["normal_form"] = render(nf);
    r.details["normal_form_json"] = term_to_json(nf);
    r.verdict = Report::V::Accept;
  } catch (const FuelExhausted& e) {
    return error_report("normalize", e.what());
  }
  return finish(r);
}

Report dispatch_on_unit(const std::string& verb, const SourceUnit& u,
                        const Options& o) {
  if (verb == "sub") return do_sub(u, o);
  if (verb == "sub-decl") return do_sub_decl(u, o);
  if (verb == "min") return do_min(u, o);
  if (verb == "check") return do_check(u, o);
  if (verb == "encode") return do_encode(u, o);
  if (verb == "classify") return do_classify(u);
  if (verb == "elaborate") return do_elaborate(u, o);
  if (verb == "normalize") return do_normalize(u, o);
  return error_report(verb, "unknown subcommand " + verb);
}

// --- corpus runner ----------------------------------------------------------

std::vector<std::string> split_args(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct CorpusHeaders {
  std::vector<std::string> run;
  std::string expect;
  std::string expect_type;
  std::string expect_term;
};

CorpusHeaders parse_headers(const std::string& text) {
  CorpusHeaders h;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("--", 0) != 0) continue;
    std::string body = line.substr(2);
    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    body = strip(body);
    if (body.rfind("run:", 0) == 0) h.run = split_args(strip(body.substr(4)));
    else if (body.rfind("expect:", 0) == 0) h.expect = strip(body.substr(7));
    else if (body.rfind("expect-type:", 0) == 0) h.expect_type = strip(body.substr(12));
    else if (body.rfind("expect-term:", 0) == 0) h.expect_term = strip(body.substr(12));
  }
  return h;
}

Report run_file(const std::string& verb, const Options& o, const std::string& path);

Report do_corpus(const Options& o) {
  Report r;
  r.command = "corpus";
  if (o.positional.size() != 1)
    return error_report("corpus", "expected exactly one directory");
  fs::path dir(o.positional[0]);
  if (!fs::is_directory(dir))
    return error_report("corpus", "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".bq")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());

  Json results = Json::array();
  int passed = 0, failed = 0;
  for (const auto& f : files) {
    std::string text = read_file(f.string());
    CorpusHeaders h = parse_headers(text);
    Json entry;
    entry["file"] = f.filename().string();
    if (h.run.empty() || h.expect.empty()) {
      entry["ok"] = false;
      entry["reason"] = "missing run/expect headers";
      ++failed;
      results.push_back(entry);
      continue;
    }
    std::string verb = h.run[0];
    Options fo;
    try {
      fo = parse_options(h.run, 1);
    } catch (const UsageError& e) {
      entry["ok"] = false;
      entry["reason"] = e.what();
      ++failed;
      results.push_back(entry);
      continue;
    }
    fo.positional.push_back(f.string());
    Report fr = run_file(verb, fo, f.string());
    std::string got = verdict_string(fr.verdict);
    bool ok = got == h.expect;
    if (ok && !h.expect_type.empty()) {
      std::string actual = fr.details.value("type", "");
      try {
        ok = alpha_eq(parse_type(actual, SystemId::Kt),
                      parse_type(h.expect_type, SystemId::Kt));
      } catch (const std::exception&) {
        ok = false;
      }
      entry["expected_type"] = h.expect_type;
      entry["type"] = actual;
    }
    if (ok && !h.expect_term.empty()) {
      std::string actual = fr.details.value("normal_form", "");
      try {
        ok = term_alpha_eq(parse_term(actual, SystemId::Kt),
                           parse_term(h.expect_term, SystemId::Kt));
      } catch (const std::exception&) {
        ok = false;
      }
      entry["expected_term"] = h.expect_term;
      entry["term"] = actual;
    }
    entry["expected"] = h.expect;
    entry["got"] = got;
    if (!ok && fr.details.contains("reason")) entry["reason"] = fr.details["reason"];
    entry["ok"] = ok;
    ok ? ++passed : ++failed;
    results.push_back(entry);
  }
  r.details["files"] = results;
  r.details["passed"] = passed;
  r.details["failed"] = failed;
  r.verdict = failed == 0 ? Report::V::Accept : Report::V::Reject;
  return finish(r);
}

Report run_file(const std::string& verb, const Options& o, const std::string& path) {
  if (verb == "lemma") return do_lemma(o);
  SourceUnit u;
  try {
    u = parse_source(read_file(path));
  } catch (const ParseError& e) {
    return error_report(verb, e.what());
  } catch (const SystemMismatch& e) {
    return error_report(verb, e.what());
  } catch (const JsonFormatError& e) {
    return error_report(verb, e.what());
  }
  return dispatch_on_unit(verb, u, o);
}

}  // namespace

Report run_command(const std::vector<std::string>& args) {
  if (args.empty())
    return error_report("bq",
                        "usage: bq <sub|sub-decl|min|check|encode|lemma|classify|"
                        "elaborate|enum|normalize|corpus> [flags] [file]");
  std::string verb = args[0];
  Options o;
  try {
    o = parse_options(args, 1);
  } catch (const UsageError& e) {
    return error_report(verb, e.what());
  }
  try {
    if (verb == "enum") return do_enum(o);
    if (verb == "lemma") return do_lemma(o);
    if (verb == "corpus") return do_corpus(o);
    if (o.positional.size() != 1)
      return error_report(verb, "expected exactly one input file");
    return run_file(verb, o, o.positional[0]);
  } catch (const UsageError& e) {
    return error_report(verb, e.what());
  } catch (const std::exception& e) {
    Report r = error_report(verb, std::string("internal error: ") + e.what(), 3);
    return r;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  bool json = std::find(args.begin(), args.end(), "--json") != args.end();
  Report r = run_command(args);
  if (json) {
    out << report_to_json(r).dump(2) << "\n";
  } else {
    (r.verdict == Report::V::Error ? err : out) << report_human(r);
  }
  return r.exit_code;
}

}  // namespace bq
