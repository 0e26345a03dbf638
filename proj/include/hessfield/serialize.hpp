#pragma once

#include "hessfield/avoidance.hpp"
#include "hessfield/domain.hpp"
#include "hessfield/operators.hpp"
#include "hessfield/projections.hpp"
#include "hessfield/reduction.hpp"
#include "hessfield/spectra.hpp"

#include "json.hpp"

#include <string>

namespace hf {

// Ordered keys keep every dump byte-stable.
using ojson = nlohmann::ordered_json;

// Owns the mesh a parsed field points into.
struct FieldDocument {
    Domain domain;
    MatrixField field;

    FieldDocument() = default;
    FieldDocument(const FieldDocument& o) : domain(o.domain), field(o.field) {
        field.domain = &domain;
    }
    FieldDocument(FieldDocument&& o) noexcept
        : domain(std::move(o.domain)), field(std::move(o.field)) {
        field.domain = &domain;
    }
    FieldDocument& operator=(const FieldDocument&) = delete;
    FieldDocument& operator=(FieldDocument&&) = delete;
};

ojson domain_to_json(const Domain& d);
Domain domain_from_json(const ojson& j);

ojson matrix_to_json(const CMat& m);            // row-major [re, im] pairs
CMat matrix_from_json(const ojson& j, int n);

// The exchange document: {"domain": {...}, "field": {"n": n, "values": [...]}}.
ojson field_to_json(const MatrixField& f);
FieldDocument field_from_json(const ojson& j);

ojson certificate_to_json(const AvoidanceCertificate& c);
ojson audit_to_json(const ContinuityAudit& a);
ojson reduction_to_json(const ReductionResult& r);
ojson separation_to_json(const SeparationReport& r);
std::string separation_to_csv(const SeparationReport& r);
ojson trace_to_json(const IterationTrace& t);
ojson sections_to_json(const SectionBundle& b);

// Canonical text form (2-space indent, trailing newline).
std::string dump(const ojson& j);
// Parse failures raise the parse error code.
ojson parse(const std::string& text);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

} // namespace hf
