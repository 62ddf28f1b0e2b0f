#include "glp/trace.hpp"

#include <algorithm>

namespace glp {

Trace dynamic_projection(const Trace& trace) {
  Trace out;
  out.reserve(trace.size());
  for (const auto& e : trace) {
    if (!e.is_special()) out.push_back(e);
  }
  return out;
}

bool is_faulty(const Trace& trace) {
  return std::any_of(trace.begin(), trace.end(),
                     [](const Event& e) { return e.kind == EventKind::ErrOut; });
}

bool is_prefix(const Trace& prefix, const Trace& trace) {
  return prefix.size() <= trace.size() && std::equal(prefix.begin(), prefix.end(), trace.begin());
}

Trace append(Trace trace, Event e) {
  trace.push_back(e);
  return trace;
}

std::string to_string(const Event& e) {
  switch (e.kind) {
    case EventKind::Action:
      return e.symbol.str();
    case EventKind::Release:
      return "rel";
    case EventKind::In:
      return "in(" + e.symbol.str() + ")";
    case EventKind::Out:
      return "out(" + e.symbol.str() + ")";
    case EventKind::ErrOut:
      return "err_out(" + e.symbol.str() + ")";
  }
  return "?";
}

std::string to_string(const Trace& trace) {
  if (trace.empty()) return "eps";
  std::string out;
  for (size_t i = 0; i < trace.size(); ++i) {
    if (i) out += '.';
    out += to_string(trace[i]);
  }
  return out;
}

std::string to_string(const LabelSeq& labels) {
  if (labels.empty()) return "eps";
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += '.';
    out += labels[i].str();
  }
  return out;
}

size_t hash_trace(const Trace& trace) {
  size_t h = trace.size();
  for (const auto& e : trace) {
    h = h * 1000003u ^ ((static_cast<size_t>(e.symbol.id()) << 3) | static_cast<size_t>(e.kind));
  }
  return h;
}

size_t hash_labels(const LabelSeq& labels) {
  size_t h = labels.size();
  for (auto l : labels) h = h * 1000003u ^ l.id();
  return h;
}

}  // namespace glp
