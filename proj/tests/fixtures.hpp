#pragma once

#include <array>
#include <string>
#include <vector>

#include "wtpleak/model.hpp"

namespace wtpleak::fixtures {

// Hand-written budget-tier shopping dialogue used across redaction and
// acceptance tests. Persona-heavy buyer, price-quoting seller.
inline Transcript grad_student_dialogue() {
  Transcript t;
  t.turns = {
      {Role::buyer,
       "Hi, I'm looking for a pair of wireless headphones. I'm a grad student and I'll "
       "mainly be using them for studying in the library and getting around on public "
       "transit, so I need something reliable that won't drain my wallet. What do you have "
       "that's practical for that kind of use?"},
      {Role::seller,
       "Great fit for your needs. I'd recommend our SoundCore Pro X at $49.99, our best "
       "value with Bluetooth 5.0, 30-hour battery life, and basic ANC to keep library "
       "noise at bay. If you want to step up a bit, the AudioTech Studio 200 at $89.99 "
       "gives you 40-hour battery, better ANC, and Bluetooth 5.2 for a bit more "
       "versatility. Either will handle daily studying and commuting reliably without "
       "breaking the bank. Want to check out either of these?"},
      {Role::buyer,
       "Thanks for those options. The 30-hour battery on the SoundCore Pro X sounds solid "
       "for my study sessions. I'm wondering though, how noticeable is the difference "
       "between \"basic\" and \"better\" ANC, and honestly, do I really need the extra 10 "
       "hours of battery if I'm charging between study days anyway? I'm trying to figure "
       "out if jumping from $50 to $90 actually makes sense for my lifestyle."},
      {Role::seller,
       "You're thinking smart. For study sessions with daily charging, the SoundCore Pro "
       "X's 30-hour battery is more than you need, that's honestly 3-4 days of use. The "
       "real difference between basic and adaptive ANC is noticeable if you're in chaotic "
       "environments, but for focused studying, basic ANC handles steady background noise "
       "just fine. The extra $40 mainly gets you better audio quality (LDAC) and "
       "marginally improved noise cancellation, nice perks, but not essential for your "
       "lifestyle. The SoundCore Pro X is genuinely solid for your situation."},
      {Role::buyer,
       "That's helpful. Honestly, sounds like the SoundCore Pro X checks all my boxes "
       "then. One last thing. I'll be wearing these for hours at a time during study "
       "sessions, sometimes back-to-back. How's the comfort on the SoundCore for long "
       "wear? Are the ear cups decent, or do they get uncomfortable after a few hours?"},
      {Role::seller,
       "The SoundCore Pro X has a solid 4.1/5 rating overall, but I'll be honest, for "
       "multi-hour study sessions, the ear cups are fairly basic padding compared to our "
       "higher-tier models. If long-term comfort is critical, the AudioTech Studio 200 "
       "($89.99) or SonicElite ANC Max ($149.99) have significantly better ergonomic "
       "design and higher ratings (4.4 and 4.6/5). That said, many users do fine with the "
       "SoundCore for extended wear, it really depends on your ear shape and sensitivity."},
      {Role::buyer,
       "I appreciate the honesty. So here's my real question. Is the SoundCore Pro X "
       "actually uncomfortable after a few hours, something I'd genuinely regret, or is "
       "it just \"not as plush\" as the pricier models? I'm looking at potentially 6-8 "
       "hour study marathons. If long-wear comfort is going to make a meaningful "
       "difference in whether I can actually focus, then spending an extra $40 for the "
       "AudioTech makes sense, but I want to make sure I'm solving an actual issue, not "
       "just upgrading for the sake of it."},
  };
  t.turn_limit_hit = true;
  return t;
}

// Reference persona-free opening lines, one per verbal cell, the shape a good
// persona redactor should produce.
inline std::vector<std::string> persona_free_openings() {
  return {
      "Hi, I'm looking for a pair of wireless headphones. I need something reliable. What "
      "do you have available?",
      "Hi there! I'm looking for some reliable wireless headphones for [PERSONA REDACTED]. "
      "Nothing too fancy, but I need them to actually work well. What options do you have "
      "that are good quality and reasonably priced?",
      "Hey there! I'm looking for wireless headphones for [PERSONA REDACTED]. I use "
      "headphones pretty much all day, so I want something reliable and comfortable, and "
      "I'd prefer a solid option at a reasonable price point. What do you have that might "
      "work?",
      "Hi there! I'm looking for a pair of wireless headphones that can really handle "
      "everything I throw at them -- [PERSONA REDACTED]. Noise cancellation is pretty "
      "crucial for me, and they need to be genuinely comfortable for wearing most of the "
      "day. What would you recommend for me?",
      "Hi there, I'm looking for a pair of wireless headphones that can really do justice "
      "to good music. I listen to a lot of different genres -- everything from classical "
      "to jazz to electronic -- so I'm pretty particular about sound quality. What kind "
      "of options do you have that focus on audio fidelity?",
      "Hello -- I'm looking for a pair of wireless headphones that can handle serious "
      "listening. I'm primarily concerned with sound quality and lossless codec support "
      "over anything else. What would you recommend?",
  };
}

// 50-plus transcript corpus: the dialogue above, the persona-free openings as
// one-turn transcripts, scripted runs across every cell, and hand-built
// currency/budget-phrase edge cases.
std::vector<Transcript> fixture_corpus();

}  // namespace wtpleak::fixtures
