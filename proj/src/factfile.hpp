#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "model.hpp"

namespace fogplan {

// Problem and event scripts are written as ground Prolog-style facts, one
// clause per line ending in a period, '%' starting a comment:
//
//   application(Id, [ServiceId, ...]).          alias: app/2
//   service(Id, [SwLabel, ...], HwReqs, [ThingLabel, ...]).
//   s2s(FromService, ToService, MaxLat, MinBw).
//   node(Id, [SwLabel, ...], HwCaps | inf, [ThingLabel, ...]).
//   link(SrcNode, DstNode, Lat, Bw).
//   hwTh(Units).  bwTh(Mbps).
//
// Event scripts accept:
//
//   set_node(Id, [Sw...], HwCaps | inf, [Things...]).
//   remove_node(Id).
//   set_link(Src, Dst, Lat, Bw).
//   remove_link(Src, Dst).
//   query.
//
// Identifiers match [a-z][A-Za-z0-9_]*; numbers are unsigned decimals.

// One parsed problem file. An app declaration is optional so a file may
// carry infrastructure only; thresholds are optional and default to zero.
struct ProblemFile {
  std::optional<AppSpec> app;
  Infrastructure infra;
  std::optional<Num> hw_th;
  std::optional<Num> bw_th;

  Thresholds thresholds() const {
    return {hw_th.value_or(Num(0)), bw_th.value_or(Num(0))};
  }

  bool operator==(const ProblemFile&) const = default;
};

// Parses problem facts. Throws ParseError with the offending position and a
// kind of Syntax, UnknownFunctor, ArityMismatch, DuplicateKey,
// DanglingReference, or InvalidValue.
ProblemFile parse_problem(std::string_view text);

// Reads and parses a file; adds Error(Io) when the file cannot be read.
ProblemFile parse_problem_file(const std::string& path);

// A bare `query.` clause: run the continuous reasoner now.
struct QueryMarker {
  bool operator==(const QueryMarker&) const = default;
};

using EventItem = std::variant<ChangeEvent, QueryMarker>;
using EventScript = std::vector<EventItem>;

// Parses an event script. Same error reporting as parse_problem, plus
// EmptyScript when no event or query is present.
EventScript parse_events(std::string_view text);

EventScript parse_events_file(const std::string& path);

// Renders a deployment as fact-style lines: `on(Service, Node)` in placement
// order, then `hw(Node, Units)` sorted by node, then `bw(Src, Dst, Mbps)`
// sorted by endpoint pair. Numbers are exact decimals.
std::string serialize_placement(const Placement& placement,
                                const HwLedger& hw_alloc,
                                const BwLedger& bw_alloc);

struct ParsedPlacement {
  Placement placement;
  HwLedger hw_alloc;
  BwLedger bw_alloc;

  bool operator==(const ParsedPlacement&) const = default;
};

// Inverse of serialize_placement; also accepts clauses with a trailing
// period. Unknown functors are rejected.
ParsedPlacement parse_placement(std::string_view text);

// Renders a problem as parse_problem input: app facts first (declaration
// order), then nodes in declaration order, links in key order, thresholds
// last. parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemFile& problem);

}  // namespace fogplan
