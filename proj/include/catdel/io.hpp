#ifndef CATDEL_IO_HPP_
#define CATDEL_IO_HPP_

// JSON documents for Kripke models, event models and sheaf models
// ("format_version": 1), plus Graphviz output for frames.

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "catdel/del.hpp"
#include "catdel/sheaf.hpp"

namespace catdel {

inline constexpr int kFormatVersion = 1;

using Document = std::variant<KripkeModel, EventModel, SheafModel>;

/// Throws SchemaError for malformed documents, InvariantViolation when the
/// described object breaks an invariant, ParseError for bad preconditions.
Document load_document(std::string_view json_text);
Document load_file(const std::string& path);

KripkeModel load_kripke_model(std::string_view json_text);
EventModel load_event_model(std::string_view json_text);
SheafModel load_sheaf_model(std::string_view json_text);
/// Only the frames and π of a sheaf-model document, without the sheaf checks.
FrameMap load_sheaf_projection(std::string_view json_text);
std::string read_file(const std::string& path);

std::string dump_model(const KripkeModel& m);
std::string dump_event_model(const EventModel& em);
std::string dump_sheaf_model(const SheafModel& m);

/// The updated model, or with `event` an "update-result" document that adds
/// the transition relation R_e.
std::string dump_update(const UpdateResult& u, const std::optional<std::string>& event);
std::string dump_sheaf_update(const SheafModel& before, const SheafUpdate& u,
                              const std::optional<std::string>& event);

/// One edge per agent and related pair; worlds carry their true atoms.
std::string frame_to_dot(const KripkeFrame& f, const std::map<std::string, Subset>& valuation = {});

}  // namespace catdel

#endif  // CATDEL_IO_HPP_
