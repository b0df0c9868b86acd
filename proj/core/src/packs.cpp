#include "wtpleak/packs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/redaction.hpp"

namespace wtpleak {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<Product> builtin_catalog() {
  return {
      {'A', "SoundCore Pro X. Bluetooth 5.0, 30-hour battery, basic ANC", 4999, 4.1,
       "Budget tier"},
      {'B', "AudioTech Studio 200. Bluetooth 5.2, 40-hour battery, adaptive ANC, LDAC codec",
       8999, 4.4, "Mid-range"},
      {'C', "SonicElite ANC Max. Bluetooth 5.3, 50-hour battery, premium ANC, spatial audio",
       14999, 4.6, "Premium"},
      {'D', "Prestige Audio Reference. Bluetooth 5.3, 60-hour battery, flagship ANC, lossless codec",
       24999, 4.8, "Luxury"},
      {'E', "Zenith Audiophile Edition. Planar magnetic drivers, reference ANC, studio-grade DAC",
       39999, 4.9, "Ultra-luxury"},
  };
}

std::vector<ConsumerProfile> builtin_profiles() {
  std::vector<ConsumerProfile> p;
  auto add = [&](std::string id, Cents target, int variant, std::string description) {
    p.push_back({std::move(id), std::move(description), target, ProfilePack::standard, variant});
  };
  add("vp_50", 5000, 1,
      "A graduate student on a very tight budget who needs basic wireless headphones for "
      "studying in the library and on public transit. Every dollar matters. They care about "
      "battery life for long study sessions but cannot justify premium features.");
  add("vp_100", 10000, 1,
      "A recent college graduate starting their first entry-level job. They need decent "
      "wireless headphones for their daily commute and occasional work calls. They want "
      "something reliable but are trying to save money on non-essential purchases.");
  add("vp_150", 15000, 1,
      "A young marketing professional who cares about music quality and uses headphones daily "
      "at work and the gym. They are budget-conscious about non-essential purchases but "
      "willing to spend moderately for something they use every day.");
  add("vp_200", 20000, 1,
      "A mid-career consultant who travels frequently and relies on headphones for long "
      "flights, client calls, and focus work. They want strong noise cancellation, comfort "
      "for multi-hour wear, and a reliable premium product they can depend on.");
  add("vp_300", 30000, 1,
      "A music enthusiast in a stable, comfortable career who deeply appreciates audio "
      "quality. They already own decent speakers and want headphones that match that "
      "fidelity. They are willing to invest in flagship features but not purely for status.");
  add("vp_500", 50000, 1,
      "A serious audiophile who has invested thousands of dollars in their home listening "
      "setup. They demand reference-quality sound reproduction, lossless codec support, and "
      "the best materials. Price is a secondary concern to sonic performance.");

  // Variants 2-3 per cell are synthetic placeholders (fv_ prefix); replace
  // them with user-supplied packs for production factorial runs.
  add("fv_50_v2", 5000, 2,
      "A retiree on a fixed pension who volunteers at the local food bank and listens to "
      "radio dramas and church choir recordings at home. They are careful with money and "
      "replace their belongings only when something breaks for good.");
  add("fv_50_v3", 5000, 3,
      "A high school senior saving part-time wages from a weekend supermarket shift. They "
      "want wireless headphones for homework at the kitchen table and the bus ride to "
      "school, and they compare prices on everything before buying.");
  add("fv_100_v2", 10000, 2,
      "A line cook who bikes to work across town and listens to podcasts on every ride. They "
      "want something sturdy that survives rain and the occasional drop, and they keep their "
      "spending on gadgets modest.");
  add("fv_100_v3", 10000, 3,
      "An elementary school teacher who grades papers in coffee shops on weekends. They need "
      "dependable headphones to block out chatter, and they treat electronics as practical "
      "tools rather than luxuries.");
  add("fv_150_v2", 15000, 2,
      "A physical therapist who runs five miles most mornings and streams workout playlists. "
      "They will pay for comfort and sweat resistance they use daily, but they skip flagship "
      "extras they would not notice.");
  add("fv_150_v3", 15000, 3,
      "A junior accountant who works in an open-plan office and commutes by light rail. They "
      "want solid noise isolation for spreadsheet work and podcasts, something worth its "
      "cost for daily use, without chasing the top of the line.");
  add("fv_200_v2", 20000, 2,
      "A regional sales manager who spends three nights a week in hotels and takes video "
      "calls from airport gates. Clear microphone quality, dependable noise cancellation, "
      "and all-day comfort matter more to them than brand prestige.");
  add("fv_200_v3", 20000, 3,
      "A PhD researcher who presents at international conferences several times a year and "
      "writes on long train journeys. They rely on noise cancellation to work in transit and "
      "want a premium, durable pair they can depend on for years.");
  add("fv_300_v2", 30000, 2,
      "An investment analyst who unwinds with high-resolution audio streaming after long "
      "market days. They own a quality DAC at their desk and want headphones that do it "
      "justice, choosing gear deliberately after reading in-depth reviews.");
  add("fv_300_v3", 30000, 3,
      "An audio engineer who mixes live shows for regional touring bands. They know driver "
      "specifications by heart, care about accurate reproduction for reference listening at "
      "home, and upgrade equipment when it measurably improves their work.");
  add("fv_500_v2", 50000, 2,
      "A partner at a law firm who built a dedicated listening room with a vacuum tube "
      "amplifier and a large vinyl collection. They buy reference-grade equipment after "
      "months of research and regard sonic accuracy as non-negotiable.");
  add("fv_500_v3", 50000, 3,
      "A composer for film and television with a treated home studio. They monitor mixes on "
      "studio-grade equipment, demand flat frequency response and lossless codec support, "
      "and replace gear only with the best available.");
  return p;
}

std::vector<ConsumerProfile> builtin_stripped_profiles() {
  std::vector<ConsumerProfile> p;
  auto add = [&](std::string id, Cents target, std::string description) {
    p.push_back({std::move(id), std::move(description), target, ProfilePack::stripped, 1});
  };
  add("sv_50", 5000,
      "A first-year graduate student in comparative literature at a public university. They "
      "share a small apartment with two roommates and walk or take the city bus to campus. "
      "They listen to recorded lectures and audiobooks while commuting and during long "
      "sessions in the library.");
  add("sv_100", 10000,
      "A community college nursing student who is also a part-time barista. They use "
      "headphones during night shifts at the cafe when they can listen to study recordings, "
      "and during the train ride home. They live with their parents in a working-class "
      "suburb on the edge of the metro area.");
  add("sv_150", 15000,
      "A marketing coordinator at a regional software company in a mid-sized city. They use "
      "headphones during video calls at the office and listen to playlists at the gym after "
      "work. They live alone in a one-bedroom rental apartment near downtown.");
  add("sv_200", 20000,
      "A management consultant in their early thirties who flies for client engagements "
      "several times a month. They take a 6 a.m. flight on Mondays and a Thursday evening "
      "flight home. They use headphones on planes, in airport lounges, and during client "
      "calls from their hotel room.");
  add("sv_300", 30000,
      "A senior software engineer who works from a home office and listens to music for five "
      "or six hours of the workday. They own their condominium in a large coastal city and "
      "have a small set of bookshelf speakers and a turntable in their living room. They "
      "keep a list of new vinyl releases.");
  add("sv_500", 50000,
      "A retired studio recording engineer who spent thirty years working on jazz and "
      "classical sessions in New York. They have a dedicated listening room at home with a "
      "tube amplifier, electrostatic loudspeakers, and a small collection of master tapes "
      "from sessions they engineered. They subscribe to two audio magazines.");
  return p;
}

std::vector<NumericCell> builtin_numeric_cells() {
  return {{"np_50", 5000},   {"np_100", 10000}, {"np_150", 15000},
          {"np_200", 20000}, {"np_300", 30000}, {"np_500", 50000}};
}

std::vector<PromptScaffold> builtin_scaffolds() {
  PromptScaffold a;
  a.id = Scaffold::A;
  a.verbal_intro = "Consumer profile:";
  a.task_block =
      "Ask the seller about the available products and their features, evaluate what you "
      "learn against the consumer's needs, and make a purchase decision on the consumer's "
      "behalf. Write a single conversational message each turn, speaking only as the "
      "customer. When you reach a final purchase decision, state it plainly, beginning that "
      "message with \"DECISION:\" followed by the product you chose.";
  a.task_block_first = false;
  a.synthetic = false;

  PromptScaffold b;
  b.id = Scaffold::B;
  b.verbal_intro = "The consumer you are shopping for is described as follows:";
  b.task_block =
      "Your job in this conversation: question the seller about what is in stock, weigh the "
      "products against the needs of the consumer you represent, and settle on one to "
      "purchase for them. Reply with one customer message per turn and nothing else. Once "
      "your choice is final, open that message with \"DECISION:\" and name the product you "
      "are buying.";
  b.task_block_first = true;
  b.synthetic = true;
  return {a, b};
}

RedactionLists builtin_lists() {
  RedactionLists lists;
  lists.budget_phrases = {
      "my budget",       "within my budget", "budget is",      "can afford",
      "afford to spend", "price range",      "spending limit", "max I can spend",
  };
  lists.financial_stopwords = {
      "budget",     "budgets",   "budgeting",  "budgetary",   "afford",    "affords",
      "afforded",   "affording", "affordable", "affordability", "save",    "saves",
      "saved",      "saving",    "savings",    "spend",       "spends",    "spending",
      "spent",      "dollar",    "dollars",    "cheap",       "cheaper",   "cheapest",
      "cheaply",    "expensive", "expensively", "pricey",     "invest",    "invests",
      "invested",   "investing", "investment", "investments", "price",     "prices",
      "priced",     "pricing",   "value",      "values",      "valued",    "valuable",
      "thrift",     "thrifty",   "frugal",     "frugally",    "frugality", "splurge",
      "splurges",   "splurged",  "splurging",
  };
  lists.valuation_phrases = {
      "price range",        "price-conscious",           "price sensitive",
      "price is no object", "price is a secondary concern",
  };
  lists.persona_terms = {
      // occupation / education
      "grad student", "graduate student", "college graduate", "college student",
      "nursing student", "high school senior", "phd researcher", "phd student", "student",
      "professor", "consultant", "marketing professional", "marketing coordinator",
      "sales manager", "line cook", "barista", "accountant", "physical therapist",
      "software engineer", "audio engineer", "recording engineer", "investment analyst",
      "analyst", "school teacher", "teacher", "retiree", "retired", "composer", "law firm",
      "my career", "my job", "my work calls", "entry-level job", "first job", "mid-career",
      "early thirties", "young professional",
      // schooling and study context
      "university", "college", "campus", "grad school", "the library", "library", "studying",
      "study sessions", "study marathons", "study recordings", "recorded lectures",
      "homework", "semester", "grades papers", "coffee shops",
      // commuting and travel
      "daily commute", "commuting", "commuter", "commute", "public transit", "transit",
      "city bus", "bus ride", "train ride", "light rail", "bike to work", "long flights",
      "flights", "airport lounges", "airport", "business trips", "travels frequently",
      "travel for work", "client calls", "client engagements", "client work", "hotel room",
      "conferences", "night shifts",
      // lifestyle, possessions, life stage
      "the gym", "workout playlists", "workouts", "morning runs", "music enthusiast",
      "audiophile", "home listening setup", "listening room", "bookshelf speakers",
      "my speakers", "turntable", "vinyl", "tube amplifier", "electrostatic loudspeakers",
      "master tapes", "audio magazines", "home studio", "home office", "condominium",
      "apartment", "roommates", "my parents", "my wallet", "wallet", "my lifestyle",
      "my wife", "my husband", "my kids", "my children", "my family",
  };
  return lists;
}

std::map<std::string, std::string> builtin_versions() {
  return {{"catalog", "1"},        {"profiles_standard", "1"}, {"profiles_stripped", "1"},
          {"numeric_cells", "1"},  {"scaffolds", "1"},         {"redaction_lists", "1"}};
}

const std::set<Cents>& allowed_targets() {
  static const std::set<Cents> targets{5000, 10000, 15000, 20000, 30000, 50000};
  return targets;
}

std::vector<std::string> cell_ids_sorted(const std::vector<ConsumerProfile>& profiles,
                                         ProfilePack pack) {
  std::vector<const ConsumerProfile*> base;
  for (const auto& p : profiles) {
    if (p.pack == pack && p.variant == 1) base.push_back(&p);
  }
  std::sort(base.begin(), base.end(),
            [](const auto* a, const auto* b) { return a->target_wtp < b->target_wtp; });
  std::vector<std::string> ids;
  ids.reserve(base.size());
  for (const auto* p : base) ids.push_back(p->id);
  return ids;
}

}  // namespace

const PackSet& builtin_packs() {
  static const PackSet packs = [] {
    PackSet p;
    p.catalog = builtin_catalog();
    p.profiles = builtin_profiles();
    p.stripped_profiles = builtin_stripped_profiles();
    p.numeric_cells = builtin_numeric_cells();
    p.scaffolds = builtin_scaffolds();
    p.lists = builtin_lists();
    p.versions = builtin_versions();
    p.validate();
    return p;
  }();
  return packs;
}

Cents PackSet::target_for_cell(const std::string& cell_id) const {
  for (const auto& p : profiles)
    if (p.id == cell_id) return p.target_wtp;
  for (const auto& p : stripped_profiles)
    if (p.id == cell_id) return p.target_wtp;
  for (const auto& c : numeric_cells)
    if (c.id == cell_id) return c.budget;
  throw LookupError("unknown cell id: '" + cell_id + "'");
}

const ConsumerProfile& PackSet::profile_by_id(const std::string& id) const {
  for (const auto& p : profiles)
    if (p.id == id) return p;
  for (const auto& p : stripped_profiles)
    if (p.id == id) return p;
  throw LookupError("unknown profile id: '" + id + "'");
}

const NumericCell& PackSet::numeric_cell_by_id(const std::string& id) const {
  for (const auto& c : numeric_cells)
    if (c.id == id) return c;
  throw LookupError("unknown numeric cell id: '" + id + "'");
}

const ConsumerProfile& PackSet::profile_for(const std::string& cell_id, int variant) const {
  const ConsumerProfile& base = profile_by_id(cell_id);
  if (variant == 1) return base;
  const auto& pool = base.pack == ProfilePack::standard ? profiles : stripped_profiles;
  for (const auto& p : pool) {
    if (p.pack == base.pack && p.variant == variant && p.target_wtp == base.target_wtp)
      return p;
  }
  throw LookupError("no variant " + std::to_string(variant) + " profile for cell '" +
                    cell_id + "'");
}

const PromptScaffold& PackSet::scaffold(Scaffold id) const {
  for (const auto& s : scaffolds)
    if (s.id == id) return s;
  throw LookupError("unknown scaffold: '" + to_string(id) + "'");
}

std::vector<std::string> PackSet::verbal_cell_ids() const {
  return cell_ids_sorted(profiles, ProfilePack::standard);
}

std::vector<std::string> PackSet::stripped_cell_ids() const {
  return cell_ids_sorted(stripped_profiles, ProfilePack::stripped);
}

std::vector<std::string> PackSet::numeric_cell_ids() const {
  std::vector<NumericCell> cells = numeric_cells;
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.budget < b.budget; });
  std::vector<std::string> ids;
  ids.reserve(cells.size());
  for (const auto& c : cells) ids.push_back(c.id);
  return ids;
}

void PackSet::validate() const {
  if (catalog.empty()) throw ValidationError("catalog pack is empty");
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& prod = catalog[i];
    if (prod.code < 'A' || prod.code > 'Z')
      throw ValidationError("product code must be a single letter");
    if (i > 0 && catalog[i - 1].code >= prod.code)
      throw ValidationError("catalog codes must be strictly ascending");
    if (i > 0 && catalog[i - 1].price >= prod.price)
      throw ValidationError("catalog prices must be strictly ascending by code order");
    if (prod.rating < 0.0 || prod.rating > 5.0)
      throw ValidationError("product rating must be within 0-5");
  }

  std::set<std::string> ids;
  auto check_profile = [&](const ConsumerProfile& p) {
    if (!ids.insert(p.id).second) throw ValidationError("duplicate profile id: " + p.id);
    if (!allowed_targets().count(p.target_wtp))
      throw ValidationError("profile " + p.id + " has an off-grid target");
    if (p.variant < 1 || p.variant > 3)
      throw ValidationError("profile " + p.id + " variant out of range");
    if (!scan_currency(p.description).empty())
      throw ValidationError("profile " + p.id + " description contains a currency amount");
  };
  for (const auto& p : profiles) {
    if (p.pack != ProfilePack::standard)
      throw ValidationError("profile " + p.id + " must belong to the standard pack");
    check_profile(p);
  }
  for (const auto& p : stripped_profiles) {
    if (p.pack != ProfilePack::stripped)
      throw ValidationError("profile " + p.id + " must belong to the stripped pack");
    check_profile(p);
    if (contains_phrase(p.description, lists.financial_stopwords))
      throw ValidationError("stripped profile " + p.id +
                            " contains a financial-register stop word");
  }

  std::set<std::string> cell_ids;
  for (const auto& c : numeric_cells) {
    if (!cell_ids.insert(c.id).second)
      throw ValidationError("duplicate numeric cell id: " + c.id);
    if (!allowed_targets().count(c.budget))
      throw ValidationError("numeric cell " + c.id + " has an off-grid budget");
  }

  bool has_a = false;
  std::set<std::string> scaffold_ids;
  for (const auto& s : scaffolds) {
    if (!scaffold_ids.insert(to_string(s.id)).second)
      throw ValidationError("duplicate scaffold id: " + to_string(s.id));
    if (s.id == Scaffold::A) has_a = true;
    if (s.task_block.empty()) throw ValidationError("scaffold task block is empty");
  }
  if (!has_a) throw ValidationError("scaffold A is required");

  if (lists.budget_phrases.empty() || lists.financial_stopwords.empty() ||
      lists.persona_terms.empty())
    throw ValidationError("redaction lists must be non-empty");
}

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out.good()) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string list_to_text(const std::vector<std::string>& entries, const std::string& version) {
  std::string out = "# version: " + version + "\n";
  for (const auto& e : entries) out += e + "\n";
  return out;
}

std::vector<std::string> list_from_text(const std::string& text, std::string& version) {
  std::vector<std::string> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# version:", 0) == 0) {
      version = line.substr(10);
      version.erase(0, version.find_first_not_of(' '));
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    entries.push_back(line);
  }
  return entries;
}

json profiles_to_json(const std::vector<ConsumerProfile>& profiles, const std::string& pack,
                      const std::string& version) {
  json j;
  j["version"] = version;
  j["pack"] = pack;
  if (pack == "standard") {
    j["note"] =
        "fv_* entries (variants 2-3) are synthetic placeholders; supply your own pack files "
        "to replace them";
  }
  j["profiles"] = json::array();
  for (const auto& p : profiles) {
    j["profiles"].push_back({{"id", p.id},
                             {"description", p.description},
                             {"target_wtp_cents", p.target_wtp},
                             {"variant", p.variant}});
  }
  return j;
}

std::vector<ConsumerProfile> profiles_from_json(const json& j, ProfilePack pack) {
  std::vector<ConsumerProfile> out;
  for (const auto& e : j.at("profiles")) {
    ConsumerProfile p;
    p.id = e.at("id").get<std::string>();
    p.description = e.at("description").get<std::string>();
    p.target_wtp = e.at("target_wtp_cents").get<Cents>();
    p.variant = e.value("variant", 1);
    p.pack = pack;
    out.push_back(std::move(p));
  }
  return out;
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw DataError("pack file " + path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace

void save_packs(const PackSet& packs, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path root(dir);
  auto version = [&](const std::string& key) {
    auto it = packs.versions.find(key);
    return it == packs.versions.end() ? std::string("1") : it->second;
  };

  json catalog;
  catalog["version"] = version("catalog");
  catalog["products"] = json::array();
  for (const auto& p : packs.catalog) {
    catalog["products"].push_back({{"code", std::string(1, p.code)},
                                   {"description", p.description},
                                   {"price_cents", p.price},
                                   {"rating", p.rating},
                                   {"tier", p.tier}});
  }
  write_text_file(root / "catalog.json", catalog.dump(2) + "\n");

  write_text_file(root / "profiles_standard.json",
                  profiles_to_json(packs.profiles, "standard", version("profiles_standard"))
                          .dump(2) +
                      "\n");
  write_text_file(root / "profiles_stripped.json",
                  profiles_to_json(packs.stripped_profiles, "stripped",
                                   version("profiles_stripped"))
                          .dump(2) +
                      "\n");

  json cells;
  cells["version"] = version("numeric_cells");
  cells["cells"] = json::array();
  for (const auto& c : packs.numeric_cells)
    cells["cells"].push_back({{"id", c.id}, {"budget_cents", c.budget}});
  write_text_file(root / "numeric_cells.json", cells.dump(2) + "\n");

  json scaffolds;
  scaffolds["version"] = version("scaffolds");
  scaffolds["scaffolds"] = json::array();
  for (const auto& s : packs.scaffolds) {
    scaffolds["scaffolds"].push_back({{"id", to_string(s.id)},
                                      {"task_block", s.task_block},
                                      {"verbal_intro", s.verbal_intro},
                                      {"task_block_first", s.task_block_first},
                                      {"synthetic", s.synthetic}});
  }
  write_text_file(root / "scaffolds.json", scaffolds.dump(2) + "\n");

  const std::string lists_version = version("redaction_lists");
  write_text_file(root / "budget_phrases.txt",
                  list_to_text(packs.lists.budget_phrases, lists_version));
  write_text_file(root / "financial_stopwords.txt",
                  list_to_text(packs.lists.financial_stopwords, lists_version));
  write_text_file(root / "valuation_phrases.txt",
                  list_to_text(packs.lists.valuation_phrases, lists_version));
  write_text_file(root / "persona_terms.txt",
                  list_to_text(packs.lists.persona_terms, lists_version));
}

PackSet load_packs(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw DataError("pack directory not found: " + dir);
  PackSet packs = builtin_packs();

  if (fs::exists(root / "catalog.json")) {
    json j = parse_json_file(root / "catalog.json");
    packs.catalog.clear();
    for (const auto& e : j.at("products")) {
      Product p;
      p.code = e.at("code").get<std::string>().at(0);
      p.description = e.at("description").get<std::string>();
      p.price = e.at("price_cents").get<Cents>();
      p.rating = e.at("rating").get<double>();
      p.tier = e.at("tier").get<std::string>();
      packs.catalog.push_back(std::move(p));
    }
    packs.versions["catalog"] = j.value("version", "unversioned");
  }
  if (fs::exists(root / "profiles_standard.json")) {
    json j = parse_json_file(root / "profiles_standard.json");
    packs.profiles = profiles_from_json(j, ProfilePack::standard);
    packs.versions["profiles_standard"] = j.value("version", "unversioned");
  }
  if (fs::exists(root / "profiles_stripped.json")) {
    json j = parse_json_file(root / "profiles_stripped.json");
    packs.stripped_profiles = profiles_from_json(j, ProfilePack::stripped);
    packs.versions["profiles_stripped"] = j.value("version", "unversioned");
  }
  if (fs::exists(root / "numeric_cells.json")) {
    json j = parse_json_file(root / "numeric_cells.json");
    packs.numeric_cells.clear();
    for (const auto& e : j.at("cells"))
      packs.numeric_cells.push_back(
          {e.at("id").get<std::string>(), e.at("budget_cents").get<Cents>()});
    packs.versions["numeric_cells"] = j.value("version", "unversioned");
  }
  if (fs::exists(root / "scaffolds.json")) {
    json j = parse_json_file(root / "scaffolds.json");
    packs.scaffolds.clear();
    for (const auto& e : j.at("scaffolds")) {
      PromptScaffold s;
      s.id = scaffold_from_string(e.at("id").get<std::string>());
      s.task_block = e.at("task_block").get<std::string>();
      s.verbal_intro = e.value("verbal_intro", "");
      s.task_block_first = e.value("task_block_first", false);
      s.synthetic = e.value("synthetic", false);
      packs.scaffolds.push_back(std::move(s));
    }
    packs.versions["scaffolds"] = j.value("version", "unversioned");
  }

  std::string lists_version;
  auto load_list = [&](const char* file, std::vector<std::string>& target) {
    if (fs::exists(root / file)) {
      target = list_from_text(read_text_file(root / file), lists_version);
      if (!lists_version.empty()) packs.versions["redaction_lists"] = lists_version;
    }
  };
  load_list("budget_phrases.txt", packs.lists.budget_phrases);
  load_list("financial_stopwords.txt", packs.lists.financial_stopwords);
  load_list("valuation_phrases.txt", packs.lists.valuation_phrases);
  load_list("persona_terms.txt", packs.lists.persona_terms);

  packs.validate();
  return packs;
}

}  // namespace wtpleak
