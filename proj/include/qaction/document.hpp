#pragma once

// Action documents: an ActionMatrix with its parameter declarations and q
// mode, serialized as a JSON object whose scalars and polynomials are
// expression strings.

#include "qaction/action.hpp"
#include "qaction/errors.hpp"

#include <optional>
#include <string>

namespace qa {

struct ActionDocument {
    std::optional<mpq_class> q_value;  // rational mode when set
    ParamSet params;
    ActionMatrix matrix;

    bool operator==(const ActionDocument& o) const {
        return q_value == o.q_value && params.names() == o.params.names() && matrix == o.matrix;
    }
};

// throws SchemaError, SyntaxError, UnknownSymbol, InvalidAutomorphism
ActionDocument parse_document(const std::string& json_text);
std::string render_document(const ActionDocument& doc);

// symbolic document whose parameters are the free symbols of m other than q,
// in registry order
ActionDocument document_of(const ActionMatrix& m);

// verification in the document's q mode
VerificationReport verify_document(const ActionDocument& doc, int degree_bound);


}  // namespace qa
