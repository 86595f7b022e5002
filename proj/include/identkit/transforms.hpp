#pragma once

#include "identkit/identcore.hpp"
#include "identkit/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace identkit {

struct Hypothesis {
    std::string description;
    bool holds = false;
};

/// A claim backed by a theorem, with the checklist that was verified.
struct Certificate {
    std::string theorem;
    std::string claim;
    std::vector<Hypothesis> hypotheses;

    bool valid() const;
};

struct TransformResult {
    ValidatedModel model;
    /// Present only when every hypothesis holds.
    std::optional<Certificate> certificate;
    /// The checklist, also when it failed.
    Certificate checklist;
};

/// Leak := keep. Certified when the Leak = V graph is an identifiable
/// path/cycle model and In u Out is inside keep.
TransformResult remove_leaks(const ValidatedModel &model, const std::vector<Vertex> &keep,
                             const RankOptions &opts = {});

/// Leak := Leak u {k}. Certified when |L| = |In u Out| and the model has
/// expected dimension under the SIOC/SC or output-connectable hypotheses.
TransformResult add_leak(const ValidatedModel &model, Vertex k, const RankOptions &opts = {});

/// Appends vertices n+1..n+s with edges k -> n+1 -> ... -> n+s -> l and a
/// leak on each new vertex. Certified when the input (Leak = V) has expected
/// dimension.
TransformResult attach_path(const ValidatedModel &model, Vertex k, Vertex l, int s, const RankOptions &opts = {});

struct PathStep {
    Vertex from = 0;
    Vertex to = 0;
    int count = 0;
};

struct ConstructionScript {
    std::vector<PathStep> steps;
    Vertex final_leak = 1;
};

/// {"steps":[[k,l,s],...],"final_leak":v}
ConstructionScript parse_construction_script(std::string_view json_text);
ConstructionScript load_construction_script(const std::string &path);
std::string serialize_construction_script(const ConstructionScript &script);

struct ConstructionResult {
    ValidatedModel model;
    std::vector<Certificate> certificates;
    bool certified() const;
};

/// Starts from the lone vertex In = Out = Leak = {1}, applies the steps, then
/// keeps only final_leak.
ConstructionResult run_construction(const ConstructionScript &script, const RankOptions &opts = {});

std::string certificate_to_text(const Certificate &c);

} // namespace identkit
