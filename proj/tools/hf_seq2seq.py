#!/usr/bin/env python3
# Copyright 2026 The absa-prompt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Command-backend adapter around a Hugging Face seq2seq model.

Use it with `--backend command --backend-arg "python3 tools/hf_seq2seq.py"`.

  train   --model M --data train.jsonl --hparams hparams.json --checkpoint DIR
  predict --model M --checkpoint DIR --inputs in.jsonl --out out.jsonl
          --max-length N --beam K

Training leaves the fine-tuned weights and train_report.json in DIR.
Optimizer, schedule and weight decay are the trainer's own defaults and are
reported back under engine_settings. Running out of accelerator memory exits
with status 75 so the caller can tell it apart from other failures.
"""
import argparse
import json
import os
import sys

RESOURCE_EXHAUSTED = 75
MAX_INPUT_TOKENS = 512


def read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def enum_value(x):
    return str(getattr(x, "value", x))


def is_oom(error):
    text = str(error).lower()
    return "out of memory" in text or "cuda error: out of memory" in text


def train(args):
    import torch
    from datasets import Dataset
    from transformers import (AutoModelForSeq2SeqLM, AutoTokenizer,
                              DataCollatorForSeq2Seq, Seq2SeqTrainer,
                              Seq2SeqTrainingArguments, set_seed)

    with open(args.hparams, encoding="utf-8") as f:
        hp = json.load(f)
    set_seed(hp["seed"])
    rows = read_jsonl(args.data)
    tokenizer = AutoTokenizer.from_pretrained(args.model)
    model = AutoModelForSeq2SeqLM.from_pretrained(args.model)

    def encode(batch):
        enc = tokenizer(batch["input_text"], max_length=MAX_INPUT_TOKENS,
                        truncation=True)
        enc["labels"] = tokenizer(text_target=batch["target_text"],
                                  max_length=hp["max_output_length"],
                                  truncation=True)["input_ids"]
        return enc

    data = Dataset.from_list([{"input_text": r["input_text"],
                               "target_text": r["target_text"]} for r in rows])
    data = data.map(encode, batched=True, remove_columns=data.column_names)
    training_args = Seq2SeqTrainingArguments(
        output_dir=os.path.join(args.checkpoint, "trainer"),
        learning_rate=hp["learning_rate"],
        per_device_train_batch_size=hp["train_batch_size"],
        gradient_accumulation_steps=hp["gradient_accumulation_steps"],
        num_train_epochs=hp["epochs"],
        seed=hp["seed"],
        save_strategy="no",
        logging_steps=10,
        report_to=[],
    )
    trainer = Seq2SeqTrainer(
        model=model,
        args=training_args,
        train_dataset=data,
        data_collator=DataCollatorForSeq2Seq(tokenizer, model=model),
    )
    result = trainer.train()
    trainer.save_model(args.checkpoint)
    tokenizer.save_pretrained(args.checkpoint)

    settings = {
        "engine": "transformers Seq2SeqTrainer",
        "optimizer": enum_value(training_args.optim),
        "lr_scheduler": enum_value(training_args.lr_scheduler_type),
        "warmup_steps": training_args.warmup_steps,
        "weight_decay": training_args.weight_decay,
        "max_input_tokens": MAX_INPUT_TOKENS,
        "device": "cuda" if torch.cuda.is_available() else "cpu",
    }
    report = {"steps": result.global_step, "final_loss": result.training_loss,
              "engine_settings": settings}
    with open(os.path.join(args.checkpoint, "train_report.json"), "w",
              encoding="utf-8") as f:
        json.dump(report, f, indent=2)


def predict(args):
    import torch
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    source = args.checkpoint or args.model
    tokenizer = AutoTokenizer.from_pretrained(source)
    model = AutoModelForSeq2SeqLM.from_pretrained(source)
    device = "cuda" if torch.cuda.is_available() else "cpu"
    model.to(device).eval()

    inputs = [row["input"] for row in read_jsonl(args.inputs)]
    outputs = []
    for start in range(0, len(inputs), 16):
        chunk = inputs[start:start + 16]
        enc = tokenizer(chunk, max_length=MAX_INPUT_TOKENS, truncation=True,
                        padding=True, return_tensors="pt").to(device)
        with torch.no_grad():
            generated = model.generate(**enc, max_length=args.max_length,
                                       num_beams=args.beam, do_sample=False)
        outputs.extend(tokenizer.batch_decode(generated,
                                              skip_special_tokens=True))
    with open(args.out, "w", encoding="utf-8") as out:
        for text in outputs:
            out.write(json.dumps({"output": text}) + "\n")


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("verb", choices=["train", "predict"])
    parser.add_argument("--model", required=True)
    parser.add_argument("--data")
    parser.add_argument("--hparams")
    parser.add_argument("--checkpoint", default="")
    parser.add_argument("--inputs")
    parser.add_argument("--out")
    parser.add_argument("--max-length", type=int, default=128)
    parser.add_argument("--beam", type=int, default=1)
    args = parser.parse_args(argv)
    try:
        train(args) if args.verb == "train" else predict(args)
    except RuntimeError as error:
        if is_oom(error):
            print(f"error: {error}", file=sys.stderr)
            return RESOURCE_EXHAUSTED
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
