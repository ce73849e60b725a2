"""End-to-end CLI checks: subcommand wiring, exit codes, determinism.

Run by ctest with MHMS_CLI and MHMS_TOY_DIR in the environment.
"""

import json
import os
import struct
import subprocess
import sys
import tempfile

CLI = os.environ["MHMS_CLI"]
TOY = os.environ["MHMS_TOY_DIR"]
MANIFEST = os.path.join(TOY, "manifest.json")

failures = []


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(
            f"{' '.join(args)}: exit {proc.returncode} (expected {expect}); stderr: {proc.stderr.strip()}"
        )
    return proc


def write_mheb(path, rows):
    payload = b"MHEB" + struct.pack("<IQQ", 1, len(rows), len(rows[0]))
    for row in rows:
        payload += struct.pack(f"<{len(row)}f", *row)
    with open(path, "wb") as f:
        f.write(payload)


def main():
    tmp = tempfile.mkdtemp(prefix="mhms-cli-")

    # Stage subcommands all succeed on the bundled manifest.
    for sub in ["segment-video", "segment-text", "summarize-video", "summarize-text"]:
        proc = run(sub, "--manifest", MANIFEST)
        doc = json.loads(proc.stdout)
        if doc.get("command") != sub or doc.get("schema") != "mhms-report/1":
            failures.append(f"{sub}: malformed report header")

    # Keyframe candidates stay within their scene's frame range.
    doc = json.loads(run("summarize-video", "--manifest", MANIFEST).stdout)
    for scene, entry in zip(doc["video"]["scenes"], doc["visual_candidates"]):
        scene_frames = 2 * (scene[1] - scene[0])  # toy item: 2 frames per shot
        for cand in entry["candidates"]:
            if not 0 <= cand["frame"] < scene_frames:
                failures.append(f"summarize-video: frame {cand['frame']} out of range")

    # Pipeline determinism through --out files.
    out1 = os.path.join(tmp, "r1.json")
    out2 = os.path.join(tmp, "r2.json")
    run("pipeline", "--manifest", MANIFEST, "--out", out1)
    run("pipeline", "--manifest", MANIFEST, "--out", out2)
    with open(out1, "rb") as f1, open(out2, "rb") as f2:
        if f1.read() != f2.read():
            failures.append("pipeline: reports differ between runs")

    report = json.load(open(out1))
    if report["video"]["scenes"] != [[0, 2], [2, 4]]:
        failures.append(f"pipeline: unexpected scenes {report['video']['scenes']}")
    for pair in report["alignment"]["pairs"]:
        if pair["chosen"]["distance"] >= 0.05:
            failures.append("pipeline: chosen distance out of bounds")

    # Unimodal fallbacks.
    for mode in ["text-only", "video-only"]:
        proc = run("pipeline", "--manifest", MANIFEST, "--unimodal", mode)
        doc = json.loads(proc.stdout)
        if doc["unimodal"]["mode"] != mode:
            failures.append(f"pipeline --unimodal {mode}: wrong mode in report")

    # Align on explicit files with both solvers.
    for solver in ["ipot", "sinkhorn"]:
        proc = run("align", "--a", os.path.join(TOY, "shots.mheb"), "--b",
                   os.path.join(TOY, "sentences.mheb"), "--solver", solver)
        doc = json.loads(proc.stdout)
        if not (0.0 <= doc["distance"] <= 2.0):
            failures.append(f"align --solver {solver}: distance out of range")

    # Evaluate.
    pred = os.path.join(tmp, "pred.txt")
    ref = os.path.join(tmp, "ref.txt")
    open(pred, "w").write("the cat sat\n")
    open(ref, "w").write("the cat ran\n")
    proc = run("evaluate", "--pred", pred, "--ref", ref)
    doc = json.loads(proc.stdout)
    if abs(doc["rouge"]["rouge-1"]["f1"] - 2.0 / 3.0) > 1e-12:
        failures.append("evaluate: rouge-1 mismatch")

    # Evaluate embedding pairs: identical rows score 100.
    emb_a = os.path.join(tmp, "a.mheb")
    emb_b = os.path.join(tmp, "b.mheb")
    write_mheb(emb_a, [[1.0, 0.0], [0.0, 1.0]])
    write_mheb(emb_b, [[1.0, 0.0], [1.0, 0.0]])
    proc = run("evaluate", "--pred-emb", emb_a, "--ref-emb", emb_b)
    doc = json.loads(proc.stdout)
    per_row = doc["cosine_similarity"]["per_row"]
    if abs(per_row[0] - 100.0) > 1e-9 or abs(per_row[1]) > 1e-9:
        failures.append(f"evaluate: cosine per-row wrong: {per_row}")
    if abs(doc["cosine_similarity"]["mean"] - 50.0) > 1e-9:
        failures.append("evaluate: cosine mean wrong")

    # Oracle check passes and exits 0.
    proc = run("oracle-check", "--trials", "20", "--seed", "7")
    doc = json.loads(proc.stdout)
    if not doc["pass"]:
        failures.append("oracle-check: reported failure")

    # Abstractive adapter wired through manifest config (echo adapter).
    adapter_manifest = os.path.join(tmp, "adapter.json")
    echo_cmd = (
        "python3 -c 'import sys, json\n"
        "for line in sys.stdin:\n"
        "    req = json.loads(line)\n"
        "    print(json.dumps({\"id\": req[\"id\"], \"v\": 1, "
        "\"candidates\": [\"summary: \" + req[\"text\"][:20]]}))\n"
        "    sys.stdout.flush()'"
    )
    json.dump(
        {
            "version": 1,
            "text": {"sentences": os.path.join(TOY, "sentences.txt"),
                     "embeddings": os.path.join(TOY, "sentences.mheb")},
            "config": {"adapter": {"mode": "process", "command": echo_cmd}},
        },
        open(adapter_manifest, "w"),
    )
    proc = run("summarize-text", "--manifest", adapter_manifest)
    doc = json.loads(proc.stdout)
    for seg in doc["text_candidates"]:
        if seg["provenance"] != "abstractive":
            failures.append(f"adapter manifest: provenance {seg['provenance']}")
        if not seg["candidates"][0]["text"].startswith("summary: "):
            failures.append("adapter manifest: candidate text not from the adapter")

    # Dead adapter with fallback enabled degrades to extractive.
    fallback_manifest = os.path.join(tmp, "fallback.json")
    json.dump(
        {
            "version": 1,
            "text": {"sentences": os.path.join(TOY, "sentences.txt"),
                     "embeddings": os.path.join(TOY, "sentences.mheb")},
            "config": {"adapter": {"mode": "process", "command": "false",
                                   "timeout_s": 2.0}},
        },
        open(fallback_manifest, "w"),
    )
    proc = run("summarize-text", "--manifest", fallback_manifest)
    doc = json.loads(proc.stdout)
    for seg in doc["text_candidates"]:
        if seg["provenance"] != "extractive-fallback":
            failures.append(f"fallback manifest: provenance {seg['provenance']}")

    # Exit code 1: validation problems.
    run("pipeline", "--manifest", os.path.join(tmp, "absent.json"), expect=1)
    bad = os.path.join(tmp, "bad.json")
    json.dump(
        {
            "version": 1,
            "text": {"sentences": os.path.join(TOY, "sentences.txt"),
                     "embeddings": os.path.join(TOY, "sentences.mheb")},
            "config": {"mystery_knob": 1},
        },
        open(bad, "w"),
    )
    run("segment-text", "--manifest", bad, expect=1)
    run("segment-text", "--manifest", bad, "--lenient", expect=0)

    # Usage errors also exit 1.
    run("align", "--a", "only-one-side.mheb", expect=1)
    run("no-such-subcommand", expect=1)

    # Exit code 2: runtime errors (zero-norm vector reaches the solver).
    zero = os.path.join(tmp, "zero.mheb")
    write_mheb(zero, [[0.0, 0.0, 0.0, 0.0]])
    run("align", "--a", zero, "--b", os.path.join(TOY, "sentences.mheb"), expect=2)

    if failures:
        print("CLI driver failures:")
        for f in failures:
            print(" -", f)
        return 1
    print("cli driver: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
