#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tg/group.hpp"
#include "tg/presentation.hpp"

namespace tg {

/// Parsed group file. Line oriented, '#' starts a comment.
///
///   group <name>
///   arity <m> | arity seq <m1> <m2> ... cycle <k>
///   phase <i>                                  generators below live at phase i (default 0)
///   rooted <g> = (<cycle notation>)            e.g. rooted a = (1 2 3)
///   recursive <g> = (<entry>,...,<entry>) [<rooted name>]
///                                              entry ::= generator | generator^<int> | 1
///   family <g> <g> ...                         finite family of the current phase
///   generators <g> <g> ...                     generating set (default: all of phase 0)
///   prime <p>
///
///   presentation <name> [over <group>]
///   alphabet <x> <y> ...
///   abbrev <x> = <word>
///   realize <x> = <word over the group's generators>
///   fixed <word>
///   relator <word>
///   substitution <name> <x> -> <word>, <y> -> <word>, ...
///
/// The last k entries of an arity sequence repeat forever.
struct GroupFile {
  std::optional<GroupSpec> group;
  std::vector<EndomorphicPresentation> presentations;
  friend bool operator==(const GroupFile&, const GroupFile&) = default;
};

/// Throws ParseError with line and column.
GroupFile parse_group_file(std::string_view text);
/// Group definition of a file; a file without a group line is a parse error.
GroupSpec parse_group_definition(std::string_view text);
GroupFile load_group_file(const std::string& path);

std::string print_group_file(const GroupFile& f);
std::string print_group_spec(const GroupSpec& g);
std::string print_presentation(const EndomorphicPresentation& p);

}  // namespace tg
