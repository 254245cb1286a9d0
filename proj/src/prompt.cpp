#include "argcascade/error.hpp"
#include "argcascade/refiner.hpp"

namespace argcascade::refiner {

RefinementInput from_sample(const ArgumentSample& sample) {
    return {sample.id, sample.scheme, sample.claim_text, sample.thesis_text, sample.topic};
}

const PromptTemplate& prompt_template(SchemeId scheme) {
    static const PromptTemplate binary{
        SchemeId::ArgsmeBinary,
        "This is a thesis “{thesis}”. And this is a claim “{claim}”. "
        "Is the claim an argument for or contra the thesis? Write a one-sentence answer."};
    static const PromptTemplate ternary{
        SchemeId::UkpTernary,
        "This is a thesis “{thesis}”. And this is a claim “{claim}”. "
        "Is the claim an argument for the thesis, an argument against the thesis, or not an argument? "
        "Write a one-sentence answer."};
    static const PromptTemplate quaternary{
        SchemeId::Us2016Quaternary,
        "This is a proposition “{thesis}”. And this is a claim “{claim}”. "
        "Is the claim an inference supporting the proposition, in conflict with it, a rephrase of it, "
        "or is there no relation? Write a one-sentence answer."};
    switch (scheme) {
    case SchemeId::ArgsmeBinary: return binary;
    case SchemeId::UkpTernary: return ternary;
    case SchemeId::Us2016Quaternary: return quaternary;
    }
    throw ValidationError("no prompt template for scheme");
}

std::string render_prompt(const RefinementInput& input) {
    if (text::trim(input.claim).empty()) throw ValidationError("render_prompt: empty claim for " + input.sample_id);

    std::string thesis;
    if (input.thesis && !text::trim(*input.thesis).empty()) {
        thesis = *input.thesis;
    } else if (input.scheme == SchemeId::UkpTernary && !text::trim(input.topic).empty()) {
        thesis = input.topic;
    } else {
        throw ValidationError("render_prompt: sample " + input.sample_id + " has no thesis, which " +
                              LabelScheme::by_id(input.scheme).name() + " prompts require");
    }

    // Slots are spliced from the template, never searched for in the
    // inserted text, so values containing "{claim}" stay verbatim.
    const std::string& t = prompt_template(input.scheme).text;
    const auto tp = t.find("{thesis}");
    const auto cp = t.find("{claim}");
    std::string out;
    out.reserve(t.size() + thesis.size() + input.claim.size());
    out.append(t, 0, tp).append(thesis).append(t, tp + 8, cp - tp - 8).append(input.claim).append(t, cp + 7);
    return out;
}

std::string render_prompt(const ArgumentSample& sample) { return render_prompt(from_sample(sample)); }

} // namespace argcascade::refiner
