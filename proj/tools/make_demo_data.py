#!/usr/bin/env python3
"""Regenerates data/demo/. Keeps the scripted fixtures and the judge scripts
aligned with the harness consumption order: topics outer, combos inner, four
utterances per discourse, judges read P1 then P2 per discourse."""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
DEMO = ROOT / "data" / "demo"

TRAITS = ["Agreeableness", "Openness", "Conscientiousness", "Extraversion", "Neuroticism"]

TOPICS = [
    "Remote work makes teams more productive.",
    "Cities should pedestrianize their historic centers.",
    "Homework should be abolished in primary school.",
]

ALL_HIGH = {t: "High" for t in TRAITS}
ALL_LOW = {t: "Low" for t in TRAITS}
MIXED_P1 = {
    "Agreeableness": "High",
    "Openness": "Low",
    "Conscientiousness": "High",
    "Extraversion": "Low",
    "Neuroticism": "High",
}
MIXED_P2 = {t: ("Low" if v == "High" else "High") for t, v in MIXED_P1.items()}

COMBOS = [
    {"p1": ALL_HIGH, "p2": ALL_LOW},
    {"p1": MIXED_P1, "p2": MIXED_P2},
]

# 6 discourses x 4 utterances, consumed in generation order. Texts carry the
# demo lexicon's social/cognition/negemo/order vocabulary so alignment has
# something to score.
UTTERANCES = [
    # topic 1, combo 1
    "Remote teams talk constantly and my friends ship more together than any office crowd ever did.",
    "Productivity claims ignore the evidence; distributed people drift and nobody checks the details.",
    "We plan our sprints carefully, share ideas openly, and the team thrives on that social energy.",
    "I worry the data is cherry-picked; consider the risk before praising scattered workplaces.",
    # topic 1, combo 2
    "A careful schedule and clear plans let quiet remote workers deliver organized, detailed results.",
    "Offices spark spontaneous talk; parties of engineers trading ideas beat lonely home desks.",
    "Stress drops when commutes vanish, and disciplined plans keep every detail on track.",
    "People need people; social friction is where the best reasons and boldest ideas surface.",
    # topic 2, combo 1
    "Pedestrian centers bring friends together; street parties and open-air talk revive civic life.",
    "Merchants fear the change, and the delivery evidence suggests real risk to small shops.",
    "Think of the shared space: people stroll, markets hum, and the social fabric strengthens.",
    "Without careful planning the detours cause stress, and that worry lands on residents.",
    # topic 2, combo 2
    "An organized rollout with detailed traffic plans protects access while calming the core.",
    "Lively plazas invite talk and chance meetings; that social spark justifies the disruption.",
    "Phase the schedule carefully, audit each detail, and the risk stays manageable.",
    "Bold ideas reshape cities; consider Barcelona, where people reclaimed the streets.",
    # topic 3, combo 1
    "Kids flourish with friends after school; family talk teaches more than worksheets ever will.",
    "Abolition sounds kind, but the evidence on practice and recall argues for measured homework.",
    "Play is social learning; children reason through games and grow together without drills.",
    "I fear gaps will widen; consider the stress on families who lack tutoring money.",
    # topic 3, combo 2
    "A planned reading routine with careful, detailed feedback beats piles of rote assignments.",
    "Let children chatter and explore; curiosity and big ideas need room, not more worksheets.",
    "Short, organized practice blocks keep skills sharp while the schedule protects family time.",
    "Open-ended projects invite wild ideas, and people remember what they reasoned out themselves.",
]


def assigned_profile(discourse_index: int, participant: str) -> dict:
    combo = COMBOS[discourse_index % len(COMBOS)]
    return combo[participant]


def judge_script(flip_trait: str, flip_every: int, offset: int) -> list[str]:
    """Predicts the assigned profile, flipping one trait on a fixed cadence so
    accuracy and agreement stay below 1.0."""
    lines = []
    for k in range(len(TOPICS) * len(COMBOS) * 2):
        participant = "p1" if k % 2 == 0 else "p2"
        predicted = dict(assigned_profile(k // 2, participant))
        if (k + offset) % flip_every == 0:
            predicted[flip_trait] = "Low" if predicted[flip_trait] == "High" else "High"
        response = json.dumps({"predicted_bfi": predicted})
        lines.append(json.dumps({"text": response}))
    return lines


def main() -> None:
    DEMO.mkdir(parents=True, exist_ok=True)

    (DEMO / "topics.txt").write_text("\n".join(TOPICS) + "\n")
    (DEMO / "combos.json").write_text(json.dumps(COMBOS, indent=2) + "\n")
    (DEMO / "demo_script.jsonl").write_text(
        "\n".join(json.dumps({"text": t}) for t in UTTERANCES) + "\n"
    )
    (DEMO / "demo_judge_keen.jsonl").write_text(
        "\n".join(judge_script("Neuroticism", 4, 1)) + "\n"
    )
    (DEMO / "demo_judge_wary.jsonl").write_text(
        "\n".join(judge_script("Openness", 3, 0)) + "\n"
    )

    (DEMO / "config.toml").write_text(
        """# Self-contained scripted demo: no network access needed.
[run]
id = "demo"
turns_per_participant = 2

[topics]
file = "topics.txt"

[traits]
file = "combos.json"
pairing = "paired"

[generation]
temperature = 0.9
seed = 7

[providers.casual]
kind = "scripted"
script = "demo_script.jsonl"

[prompts]
dir = "../templates"

[metrics]
similarity_threshold = 0.9
"""
    )

    (DEMO / "judges.toml").write_text(
        """# Two scripted judges so agreement tables have two raters.
[judges.keen]
kind = "scripted"
script = "demo_judge_keen.jsonl"

[judges.wary]
kind = "scripted"
script = "demo_judge_wary.jsonl"
"""
    )

    lexicon = {
        "categories": {
            "social": ["friend", "parti", "social", "talk", "people", "team"],
            "cognition": ["think", "consider", "reason", "evidence", "idea"],
            "negemo": ["worry", "stress", "fear", "anxious", "risk"],
            "order": ["plan", "careful", "schedul", "detail", "organiz"],
        },
        "markers": {
            "Extraversion": [["social", 1.0]],
            "Openness": [["cognition", 1.0]],
            "Neuroticism": [["negemo", 1.0]],
            "Conscientiousness": [["order", 1.0], ["cognition", 0.25]],
            "Agreeableness": [["social", 0.5], ["negemo", -0.5]],
        },
    }
    (DEMO / "lexicon_demo.json").write_text(json.dumps(lexicon, indent=2) + "\n")

    print(f"wrote {DEMO}")


if __name__ == "__main__":
    main()
