#pragma once

#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gsf/formality.hpp"

namespace gsf {

using Json = nlohmann::ordered_json;

struct Config {
    int d = 3;  // Calabi-Yau dimension; gamma_degree = 6-2d, twist = 2d-5
    TruncationWindow window;
    unsigned long long seed = 1;
    bool stable_graphs = false;

    int gamma_degree() const { return 6 - 2 * d; }
};

// Declarative instance file: config, named spaces/kernels/presentations/
// elements and a campaign list. Unknown fields are rejected.
struct InstanceFile {
    Config config;
    std::map<std::string, SpacePtr> spaces;
    std::map<std::string, ContractionKernel> kernels;
    std::map<std::string, BDPresentation> presentations;
    std::map<std::string, Element> elements;
    std::vector<Json> campaigns;  // raw campaign objects, validated per type

    static InstanceFile parse(const Json& j);
    static InstanceFile load(const std::string& path);
};

unsigned long long fnv1a64(const std::string& bytes);

struct CheckLine {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct CampaignResult {
    std::string id, type;
    bool pass = true;
    bool input_error = false;
    std::vector<CheckLine> checks;
    Json details;  // campaign-specific payload (tables, elements, counts)
};

// Deterministic random source for seeded campaigns.
class Rng {
public:
    explicit Rng(unsigned long long seed) : engine_(seed) {}
    unsigned long long raw() { return engine_(); }
    int uniform(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(raw() % static_cast<unsigned long long>(hi - lo + 1));
    }
    bool coin() { return raw() & 1; }
    Rational small_rational() {
        static const int nums[] = {-3, -2, -1, 1, 2, 3};
        return rat(nums[uniform(0, 5)], uniform(1, 3));
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// Seeded generators for the randomized suites.
namespace gen {

// Letters whose degrees cluster around (6-2d)/2 so that kernel pairs exist.
SpacePtr random_space(Rng& rng, int dim, int d);
ContractionKernel random_kernel(Rng& rng, SpacePtr sp);
Term random_term(Rng& rng, const GradedSpace& space, int max_len, int max_gamma);

// Free-BV presentation on <= max_letters generators with a graded-symmetric
// bracket pairing (support 5-2d) and optionally a differential on chain pairs
// that the pairing does not see.
BDPresentation random_w_presentation(Rng& rng, int max_letters, int d);

// Closed-sector family for the commutation certificate: zero bracket,
// d1 != 0 on chain pairs, kernel a chain-map pairing.
struct ChainInstance {
    BDPresentation closed;
    ContractionKernel kernel;
};
ChainInstance chain_instance(Rng& rng, int d);

}  // namespace gen

// Campaign runners; the CLI and the acceptance suite share these.
CampaignResult run_gt_campaign(int g_max, int n_max, int m_max, int k_max, int halves_max,
                               DefectMode mode);
CampaignResult run_bvinf_campaign(unsigned long long seed, int count, int dim_max, int word_max,
                                  int m_max, int d, bool hand_instances, EvalGuard* guard);
CampaignResult run_key_lemma_campaign(unsigned long long seed, int count, int d, int w_letters_max,
                                      EvalGuard* guard);
CampaignResult run_bd_axiom_campaign(unsigned long long seed, int count, int d,
                                     const TruncationWindow& window, bool mutations);
CampaignResult run_commutation_campaign(unsigned long long seed, int instances, int d,
                                        const TruncationWindow& window, int max_arity,
                                        bool certify, EvalGuard* guard);
CampaignResult run_aut_oracle_campaign(unsigned long long seed, int count, int dim_max, int d,
                                       int halves_max, EvalGuard* guard);
CampaignResult run_linfty_campaign(unsigned long long seed, int d, const TruncationWindow& window);

CampaignResult run_enumerate_campaign(int g, int n, int m,
                                      const std::optional<std::vector<std::pair<int, int>>>& profile,
                                      bool stable);
CampaignResult run_eval_campaign(const InstanceFile& file, const Json& campaign);

// Dispatches one campaign object from an instance file.
CampaignResult run_campaign(const InstanceFile& file, const Json& campaign, EvalGuard* guard);

// Deterministic report for a finished campaign list.
Json make_report(const InstanceFile& file, const std::string& input_dump,
                 const std::vector<CampaignResult>& results, bool include_timings = false,
                 double elapsed_ms = 0.0);

// Taylor families as sparse maps (arity, input words with gamma exponents) ->
// Element, shared wire format for table-backed morphisms.
Json taylor_to_json(const TableMorphism& f);
TableMorphism taylor_from_json(SpacePtr src, SpacePtr tgt, const Json& j);

Json element_to_json(const Element& e);
Element element_from_json(const GradedSpace& space, const Json& j);

// Structure constants as sparse triples, matching the instance-file schema
// (type "tables"), so a round trip through parse reproduces the presentation.
Json presentation_to_json(const BDPresentation& p, const std::string& name);
Json kernel_to_json(const ContractionKernel& k, const std::string& name,
                    const std::string& space_name);
Json space_to_json(const GradedSpace& s, const std::string& name);

}  // namespace gsf
