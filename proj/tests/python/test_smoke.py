"""Smoke checks for the python extension module."""

import json
import math
import os
import sys
import tempfile

import _sdforge as m


def test_tokenize():
    assert m.tokenize("What color is the chair?") == [
        "what", "color", "is", "the", "chair", "?"]
    assert m.stem("lamps") == "lamp"


def test_embedding():
    v = m.reference_embed("a red chair", dimension=64)
    assert len(v) == 64
    assert math.isclose(sum(x * x for x in v), 1.0, rel_tol=1e-9)
    assert m.cosine(v, v) == 1.0
    assert m.semantic_similarity("red chair", "red chair") == 1.0


def test_nli():
    assert m.reference_nli("the red chair", "the chair is red") == 1.0


def test_calibration():
    mu, sigma, tau = m.calibrate_threshold([0.7, 0.9])
    assert math.isclose(mu, 0.8, abs_tol=1e-12)
    assert math.isclose(sigma, 0.1, abs_tol=1e-12)
    assert math.isclose(tau, 0.996, abs_tol=1e-12)


def test_iou():
    a = m.Box3D(center=[0, 0, 0], dims=[1, 1, 1])
    b = m.Box3D(center=[0.5, 0, 0], dims=[1, 1, 1])
    assert math.isclose(m.iou3d(a, b), 1.0 / 3.0, abs_tol=1e-12)


def test_metrics():
    assert math.isclose(
        m.bleu(["the the the the"], [["the cat sat down"]], n=1), 0.25)
    report = m.evaluate(["a red chair", "a blue lamp"],
                        [["a red chair"], ["a blue lamp"]])
    assert math.isclose(report["bleu_1"], 1.0)
    assert math.isclose(report["rouge_l"], 1.0)
    assert report["cider"] > 0.0


def test_classify():
    assert m.classify_question("what color is it?") == "local_object"
    assert m.classify_question("how many chairs?") == "global_context"
    assert m.classify_question("what is next to the bed?") == "relational"


def test_synonym_replace():
    record = m.QARecord(id="q1", scene_id="scene0000_00",
                        question="is the big couch comfortable?",
                        answers=["yes"])
    variants = m.synonym_replace(record, {"couch": ["sofa"]}, seed=0,
                                 max_subs=1)
    assert len(variants) == 1
    assert variants[0].question == "is the big sofa comfortable?"
    assert variants[0].provenance == "qa_gen"


def test_run_pipeline():
    with tempfile.TemporaryDirectory() as tmp:
        qa_path = os.path.join(tmp, "qa.jsonl")
        with open(qa_path, "w") as f:
            for i in range(6):
                f.write(json.dumps({
                    "id": f"q{i}",
                    "scene_id": "scene0000_00",
                    "question": "what is on the desk, next to the lamp?",
                    "answers": ["books"],
                }) + "\n")
        config_path = os.path.join(tmp, "config.json")
        with open(config_path, "w") as f:
            json.dump({
                "qa_path": qa_path,
                "out_dir": os.path.join(tmp, "out"),
                "seed": 7,
                "enable_caption_gen": False,
                "enable_scene_gen": False,
                "created_at": "1970-01-01T00:00:00Z",
            }, f)
        result = m.run_pipeline(config_path)
        assert result["generated"] > 0
        assert result["kept"] + result["rejected"] + result["duplicates"] == \
            result["generated"]
        assert result["total"] == 6 + result["kept"]
        with open(os.path.join(tmp, "out", "manifest.json")) as f:
            manifest = json.load(f)
        assert manifest["total"] == result["total"]
        assert manifest["threshold_set"]["tau_qa"] == 0.82


def main():
    tests = [v for k, v in sorted(globals().items())
             if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
