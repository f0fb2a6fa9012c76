#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "holmes/error.hpp"
#include "holmes/net.hpp"
#include "holmes/pipeline.hpp"
#include "holmes/synth.hpp"
#include "holmes/text.hpp"
#include "json.hpp"

namespace holmes::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  int senders = 50;
  int recipients = 10;
  int rate = 20;
  int subjects = 3;
  std::string countries = "US,GB,DE,FR,NL,SG,JP,AU";
  int days = 2;
  std::string start = "2020-12-01T00:00:00Z";
  int anomalies = 0;
  int takeover = 0;
  int malvert = 0;
  std::string anomaly_start;
  std::string anomaly_end;
  std::uint64_t seed = 1;
  std::string output;
  std::string labels;
};

struct DetectOptions {
  std::string train;
  std::string test;
  std::string input;
  std::string window = "24h";
  std::string train_window;
  std::string out_dir;
  std::string listen;
  std::string connect;
  bool use_stdin = false;
  std::string port_file;
  std::string lateness = "0";
  int vector_size = 40;
  int epochs = 40;
  int min_count = 2;
  int negative = 5;
  double alpha = 0.025;
  int k = 20;
  double contamination = 0.5;
  double threshold = 0.0;
  int rareness_threshold = 2;
  std::uint64_t seed = 1;
  bool serial = false;
  bool dump_vectors = false;
  std::vector<std::string> graph_formats = {"json", "dot"};
};

struct ParseEmlOptions {
  std::string dir;
  std::string meta;
  std::string output;
};

struct ReplayOptions {
  std::string input;
  std::string listen;
  std::string connect;
  std::string port_file;
  double rate = 0.0;
};

// key=value lines become --key=value arguments placed before the user's
// own flags, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out = args;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
      const auto body = text::trim(line);
      if (body.empty() || body.front() == '#' || body.front() == '[') continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError("config line without '=': " + std::string(body));
      }
      const auto key = text::trim(body.substr(0, eq));
      const auto value = text::trim(body.substr(eq + 1));
      injected.push_back("--" + std::string(key) + "=" + std::string(value));
    }
    if (out.size() < 2) break;
    out.insert(out.begin() + 2, injected.begin(), injected.end());
    break;
  }
  return out;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

int cmd_gen(const GenOptions& o, std::ostream& out) {
  GeneratorSpec spec;
  spec.n_senders = o.senders;
  spec.recipients_per_sender = o.recipients;
  spec.events_per_relation_per_day = o.rate;
  spec.subject_pool_size = o.subjects;
  spec.baseline_countries = split_list(o.countries);
  if (o.days < 1) throw Error(ErrorCode::InvalidSpec, "--days must be >= 1");
  spec.duration = Duration{static_cast<std::int64_t>(o.days) * 86400};
  spec.start = parse_iso8601(o.start);
  spec.seed = o.seed;
  // Anomalies default to the final day, the last detect window.
  const Duration begin = o.anomaly_start.empty()
                             ? std::max(Duration{0}, spec.duration - Duration{86400})
                             : parse_duration(o.anomaly_start);
  const Duration end = o.anomaly_end.empty() ? spec.duration : parse_duration(o.anomaly_end);
  auto add = [&](AnomalyKind kind, int count) {
    if (count > 0) spec.anomalies.push_back({kind, count, begin, end});
  };
  add(AnomalyKind::novel_sender_phish, o.anomalies);
  add(AnomalyKind::account_takeover_burst, o.takeover);
  add(AnomalyKind::malvertisement_blast, o.malvert);

  const auto data = generate(spec);
  const fs::path corpus_path(o.output);
  const fs::path labels_path =
      o.labels.empty() ? fs::path(corpus_path).replace_extension(".labels.jsonl")
                       : fs::path(o.labels);
  write_corpus(data.corpus, corpus_path);
  write_labels(data, labels_path);
  const auto anomalous = std::count_if(data.labels.begin(), data.labels.end(),
                                       [](const auto& kv) { return kv.second == Label::anomalous; });
  nlohmann::ordered_json summary;
  summary["corpus"] = corpus_path.string();
  summary["labels"] = labels_path.string();
  summary["events"] = data.corpus.events.size();
  summary["anomalous"] = anomalous;
  out << summary.dump() << '\n';
  return kSuccess;
}

WindowConfig make_config(const DetectOptions& o) {
  WindowConfig cfg;
  cfg.detect_duration = parse_duration(o.window);
  cfg.train_duration = o.train_window.empty() ? cfg.detect_duration
                                              : parse_duration(o.train_window);
  cfg.embedding.vector_size = o.vector_size;
  cfg.embedding.epochs = o.epochs;
  cfg.embedding.min_count = o.min_count;
  cfg.embedding.negative_samples = o.negative;
  cfg.embedding.initial_learning_rate = o.alpha;
  cfg.embedding.seed = o.seed;
  cfg.novelty.n_neighbors = o.k;
  cfg.novelty.contamination = o.contamination;
  cfg.novelty.decision_threshold = o.threshold;
  cfg.rareness_threshold = o.rareness_threshold;
  cfg.execution = o.serial ? kernels::Execution::serial : kernels::Execution::parallel;
  cfg.validate();
  return cfg;
}

void write_port_file(const std::string& path, std::uint16_t port) {
  if (path.empty()) return;
  // Written to a temporary name first so readers never see a partial file.
  const fs::path tmp = path + ".tmp";
  write_text(tmp, std::to_string(port) + "\n");
  fs::rename(tmp, path);
}

int cmd_detect(const DetectOptions& o, std::ostream& out, std::ostream& err) {
  const int modes = (o.train.empty() && o.test.empty() ? 0 : 1) + (o.input.empty() ? 0 : 1) +
                    (o.listen.empty() ? 0 : 1) + (o.connect.empty() ? 0 : 1) +
                    (o.use_stdin ? 1 : 0);
  if (modes != 1) {
    throw UsageError("choose exactly one of --train/--test, --input, --listen, --connect, --stdin");
  }
  if (o.train.empty() != o.test.empty()) {
    throw UsageError("--train and --test must be given together");
  }
  std::vector<GraphFormat> formats;
  for (const auto& f : o.graph_formats) {
    try {
      formats.push_back(parse_graph_format(f));
    } catch (const Error& ex) {
      throw UsageError(ex.what());
    }
  }
  WindowConfig cfg;
  try {
    cfg = make_config(o);
  } catch (const Error& ex) {
    throw UsageError(ex.what());
  }
  const fs::path out_dir(o.out_dir);
  fs::create_directories(out_dir);

  auto write_report = [&](const DetectionReport& r) {
    const fs::path report_path = out_dir / report_filename(r);
    write_text(report_path, report_to_json(r));
    nlohmann::ordered_json line;
    line["report"] = report_path.string();
    for (auto f : formats) {
      const bool json = f == GraphFormat::json;
      const fs::path graph_path = out_dir / window_filename(r, "graph", json ? "json" : "dot");
      write_text(graph_path, export_graph(r.graph, f) + (json ? "\n" : ""));
      line[json ? "graph_json" : "graph_dot"] = graph_path.string();
    }
    line["detect_events"] = r.counts.detect_events;
    line["novel"] = r.counts.novel;
    line["rare"] = r.counts.rare;
    out << line.dump() << '\n' << std::flush;
  };
  CycleHooks hooks;
  if (o.dump_vectors) {
    hooks.on_vectors = [&](const DetectionReport& r, const std::vector<DocVector>& v) {
      std::ofstream f(out_dir / window_filename(r, "vectors", "jsonl"), std::ios::binary);
      write_vectors(v, f);
    };
  }

  if (!o.train.empty()) {
    const Corpus train = read_corpus(fs::path(o.train));
    const Corpus test = read_corpus(fs::path(o.test));
    write_report(run_cycle(train.events, test.events, cfg, std::nullopt, std::nullopt, &hooks));
    return kSuccess;
  }
  if (!o.input.empty()) {
    BatchFileSource source{fs::path(o.input)};
    run_rolling(source, cfg, write_report, &hooks);
    return kSuccess;
  }

  const Duration lateness = o.lateness == "0" ? Duration{0} : parse_duration(o.lateness);
  auto consume = [&](std::istream& in, const std::string& label) {
    LineStreamSource source(in, lateness, label);
    run_rolling(source, cfg, write_report, &hooks);
  };
  if (o.use_stdin) {
    consume(std::cin, "stdin");
  } else if (!o.listen.empty()) {
    const auto ep = net::parse_endpoint(o.listen);
    auto listener = net::listen_on(ep);
    const auto port = net::local_port(listener);
    err << "listening on " << ep.host << ":" << port << '\n';
    write_port_file(o.port_file, port);
    net::SocketStream stream(net::accept_one(listener));
    consume(stream, o.listen);
  } else {
    net::SocketStream stream(net::connect_to(net::parse_endpoint(o.connect)));
    consume(stream, o.connect);
  }
  return kSuccess;
}

EnvelopeMetadata metadata_from(const nlohmann::json& j, const std::string& file) {
  auto get = [&](const char* key) -> std::string {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) {
      throw Error(ErrorCode::InvalidValue, std::string("sidecar field '") + key +
                                               "' is not a string");
    }
    return it->get<std::string>();
  };
  EnvelopeMetadata meta;
  meta.event_id = get("event_id");
  if (meta.event_id.empty()) meta.event_id = file;
  const auto ts = get("timestamp");
  if (!ts.empty()) {
    meta.timestamp = parse_iso8601(ts);
    meta.has_timestamp = true;
  }
  meta.src_ip = get("src_ip");
  const auto country = get("src_country");
  if (!country.empty()) meta.src_country = country;
  const auto dir = get("direction");
  if (!dir.empty()) meta.direction = parse_direction(dir);
  meta.mail_from = get("mail_from");
  return meta;
}

int cmd_parse_eml(const ParseEmlOptions& o, std::ostream& out, std::ostream& err) {
  std::map<std::string, nlohmann::json> sidecar;
  {
    std::ifstream in(o.meta, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + o.meta);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        auto j = nlohmann::json::parse(line);
        const auto file = j.at("file").get<std::string>();
        sidecar[file] = std::move(j);
      } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::MalformedLine,
                    o.meta + ":" + std::to_string(line_no) + ": " + ex.what());
      }
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.dir)) {
    if (!entry.is_regular_file()) continue;
    if (fs::exists(o.meta) && fs::equivalent(entry.path(), o.meta)) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<EmailEvent> events;
  std::size_t failed = 0;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    try {
      const auto it = sidecar.find(name);
      if (it == sidecar.end()) {
        throw Error(ErrorCode::MissingRequired, "no sidecar metadata");
      }
      events.push_back(parse_raw_headers(read_text(path), metadata_from(it->second, name)));
    } catch (const Error& ex) {
      ++failed;
      err << "warning: " << name << ": " << ex.what() << '\n';
    }
  }
  if (events.empty()) {
    throw Error(ErrorCode::NoHeaders, "no header file in " + o.dir + " could be parsed");
  }
  const Corpus corpus = make_corpus(std::move(events), o.dir);
  write_corpus(corpus, fs::path(o.output));
  nlohmann::ordered_json summary;
  summary["corpus"] = o.output;
  summary["events"] = corpus.events.size();
  summary["failed"] = failed;
  out << summary.dump() << '\n';
  return kSuccess;
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  if (o.listen.empty() == o.connect.empty()) {
    throw UsageError("choose exactly one of --listen and --connect");
  }
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + o.input);
  net::Socket socket;
  if (!o.listen.empty()) {
    const auto ep = net::parse_endpoint(o.listen);
    auto listener = net::listen_on(ep);
    const auto port = net::local_port(listener);
    err << "listening on " << ep.host << ":" << port << '\n';
    write_port_file(o.port_file, port);
    socket = net::accept_one(listener);
  } else {
    socket = net::connect_to(net::parse_endpoint(o.connect));
  }
  std::size_t lines = 0;
  {
    net::SocketStream stream(std::move(socket));
    lines = replay_lines(in, stream, o.rate);
    stream.flush();
    stream.socket().shutdown_write();
  }
  nlohmann::ordered_json summary;
  summary["lines"] = lines;
  out << summary.dump() << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anomalous email detection over SMTP header event logs", "holmes"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a labeled synthetic corpus");
  g->add_option("--senders", gen.senders, "Baseline senders")->capture_default_str();
  g->add_option("--recipients", gen.recipients, "Recipients per sender")->capture_default_str();
  g->add_option("--rate", gen.rate, "Events per relation per day")->capture_default_str();
  g->add_option("--subjects", gen.subjects, "Subject pool size per sender")->capture_default_str();
  g->add_option("--countries", gen.countries, "Comma-separated baseline countries")
      ->capture_default_str();
  g->add_option("--days", gen.days, "Corpus length in days")->capture_default_str();
  g->add_option("--start", gen.start, "Corpus start (UTC)")->capture_default_str();
  g->add_option("--anomalies", gen.anomalies, "Injected novel_sender_phish events")
      ->capture_default_str();
  g->add_option("--takeover", gen.takeover, "Injected account_takeover_burst events");
  g->add_option("--malvert", gen.malvert, "Injected malvertisement_blast events");
  g->add_option("--anomaly-start", gen.anomaly_start,
                "Anomaly window start offset (default: start of the last day)");
  g->add_option("--anomaly-end", gen.anomaly_end, "Anomaly window end offset");
  g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  g->add_option("-o,--output", gen.output, "Corpus JSONL path")->required();
  g->add_option("--labels", gen.labels, "Labels JSONL path (default <output>.labels.jsonl)");
  g->add_option("--config", "key=value defaults file");

  DetectOptions det;
  auto* d = app.add_subcommand("detect", "Run detection cycles and write reports");
  d->add_option("--train", det.train, "Training window corpus (two-file form)");
  d->add_option("--test", det.test, "Detect window corpus (two-file form)");
  d->add_option("--input", det.input, "Single corpus split into rolling windows");
  d->add_option("--listen", det.listen, "Stream mode: accept one connection on host:port");
  d->add_option("--connect", det.connect, "Stream mode: connect to host:port");
  d->add_flag("--stdin", det.use_stdin, "Stream mode: read events from standard input");
  d->add_option("--port-file", det.port_file, "Write the bound --listen port here");
  d->add_option("--lateness", det.lateness, "Stream reorder tolerance, e.g. 30s")
      ->capture_default_str();
  d->add_option("--window", det.window, "Detect window length")->capture_default_str();
  d->add_option("--train-window", det.train_window, "Training window length (default --window)");
  d->add_option("--out", det.out_dir, "Output directory")->required();
  d->add_option("--vector-size", det.vector_size)->capture_default_str();
  d->add_option("--epochs", det.epochs)->capture_default_str();
  d->add_option("--min-count", det.min_count)->capture_default_str();
  d->add_option("--negative", det.negative, "Negative samples")->capture_default_str();
  d->add_option("--alpha", det.alpha, "Initial learning rate")->capture_default_str();
  d->add_option("--k", det.k, "LOF neighbors")->capture_default_str();
  d->add_option("--contamination", det.contamination)->capture_default_str();
  d->add_option("--threshold", det.threshold, "Decision score threshold")->capture_default_str();
  d->add_option("--rareness-threshold", det.rareness_threshold)->capture_default_str();
  d->add_option("--seed", det.seed, "Embedding seed")->capture_default_str();
  d->add_flag("--serial", det.serial, "Use the serial reference kernels");
  d->add_flag("--dump-vectors", det.dump_vectors, "Write vectors_<window>.jsonl");
  d->add_option("--graph-format", det.graph_formats, "json and/or dot")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',')
      ->capture_default_str();
  d->add_option("--config", "key=value defaults file");

  ParseEmlOptions eml;
  auto* p = app.add_subcommand("parse-eml", "Build a corpus from raw header files");
  p->add_option("--dir", eml.dir, "Directory of header files")->required();
  p->add_option("--meta", eml.meta, "Sidecar JSONL keyed by \"file\"")->required();
  p->add_option("-o,--output", eml.output, "Corpus JSONL path")->required();
  p->add_option("--config", "key=value defaults file");

  ReplayOptions rep;
  auto* r = app.add_subcommand("replay", "Replay a corpus over TCP, one event per line");
  r->add_option("--input", rep.input, "Corpus JSONL")->required();
  r->add_option("--listen", rep.listen, "Accept one connection on host:port");
  r->add_option("--connect", rep.connect, "Connect to host:port");
  r->add_option("--port-file", rep.port_file, "Write the bound --listen port here");
  r->add_option("--rate", rep.rate, "Lines per second, 0 = unlimited")->capture_default_str();
  r->add_option("--config", "key=value defaults file");

  try {
    const auto args = expand_config(raw_args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (g->parsed()) return cmd_gen(gen, out);
    if (d->parsed()) return cmd_detect(det, out, err);
    if (p->parsed()) return cmd_parse_eml(eml, out, err);
    if (r->parsed()) return cmd_replay(rep, out, err);
    return kUsageError;
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& ex) {
    err << "holmes: " << ex.what() << '\n'
        << "Run with --help for usage.\n";
    return kUsageError;
  } catch (const UsageError& ex) {
    err << "holmes: " << ex.what() << '\n';
    return kUsageError;
  } catch (const Error& ex) {
    err << "holmes: " << ex.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& ex) {
    err << "holmes: " << ex.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace holmes::cli
