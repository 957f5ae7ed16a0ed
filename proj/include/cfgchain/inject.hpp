#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfgchain {

/// The five fault injectors. The first three are explicit syntax errors
/// (ESE), the last two implicit semantic errors (ISE).
enum class InjectionKind {
  MissingBrace,
  MissingSemicolon,
  MissingOperator,
  EmptyStatement,
  ScopeError,
};

enum class ErrorCategory { Explicit, Implicit };

const char* injection_kind_name(InjectionKind k);
std::optional<InjectionKind> injection_kind_from_name(std::string_view name);
ErrorCategory injection_category(InjectionKind k);

/// A single text edit in coordinates of the original string. Removal-only,
/// insertion-only or replacement depending on which side is empty.
struct Edit {
  std::size_t pos = 0;
  std::string removed;
  std::string inserted;
};

struct MutationRecord {
  InjectionKind kind = InjectionKind::MissingBrace;
  unsigned seed = 0;
  std::size_t site_index = 0;
  std::size_t site_count = 0;
  std::vector<Edit> edits;
};

struct Mutation {
  std::string code;
  MutationRecord record;
};

/// Eligible mutation sites for `kind`, in source order:
///   missing_brace      every `}` token;
///   missing_semicolon  the second `;` of each for-header;
///   missing_operator   strict `<`/`>` comparisons in for/while headers whose
///                      step direction pins the operator down, so the
///                      intended behavior stays recoverable;
///   empty_statement    loop/if headers directly followed by `{`;
///   scope_error        braced loop/if bodies holding at least two statements.
std::vector<std::vector<Edit>> eligible_sites(const std::string& code,
                                              InjectionKind kind);

/// Applies exactly one mutation, chosen deterministically from the eligible
/// sites by `seed`. Raises NoEligibleSite when the code offers none.
Mutation inject_error(const std::string& code, InjectionKind kind,
                      unsigned seed);

/// Undoes a mutation byte-exactly.
std::string apply_inverse(const std::string& mutated,
                          const MutationRecord& record);

std::string mutation_record_json(const MutationRecord& record);

}  // namespace cfgchain
