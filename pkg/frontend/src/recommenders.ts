import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { CliError, NotTrainedError, runCfkit } from "./runner.js";

/** How the dataset file is laid out; defaults match MovieLens (tab, cols 0/1/2). */
export interface FileSpecOptions {
    dlmchar?: string;
    header?: boolean;
    usercol?: number;
    itemcol?: number;
    ratingcol?: number;
}

export interface Prediction {
    user: string;
    item: string;
    prediction: number;
}

export interface TestResult {
    predictions: Prediction[];
    mae: number;
    rmse: number;
}

export interface SvdTrainOptions {
    factors?: number;
    maxiter?: number;
    lr?: number;
    lamb?: number;
    seed?: number;
}

export interface KnnTrainOptions {
    k?: number;
}

const METRICS = /MAE: (\d+\.\d{6})  RMSE: (\d+\.\d{6})/;

/**
 * Base class: holds the dataset path and file spec from construction, and
 * drives the cfkit CLI for train/predict/recommend/test. No recommendation
 * logic lives on this side; every number comes from the core process.
 */
export abstract class Recommender {
    abstract readonly algo: string;

    readonly datasetPath: string;
    readonly options: FileSpecOptions;
    private readonly workdir: string;
    private readonly modelPath: string;
    private trained = false;

    constructor(datasetPath: string, options: FileSpecOptions = {}) {
        this.datasetPath = path.resolve(datasetPath);
        if (!fs.existsSync(this.datasetPath)) {
            throw new Error(`dataset file not found: ${this.datasetPath}`);
        }
        this.options = { ...options };
        this.workdir = fs.mkdtempSync(path.join(os.tmpdir(), "cfkit-client-"));
        this.modelPath = path.join(this.workdir, "model.json");
    }

    /** Train on the construction dataset and keep the model on disk. */
    train(options: object = {}): this {
        runCfkit([
            "train",
            "--algo", this.algo,
            "--train", this.datasetPath,
            "--model", this.modelPath,
            ...this.specArgs(),
            ...this.trainArgs(options),
        ]);
        this.trained = true;
        return this;
    }

    /** Predicted rating for one (user, item) pair. */
    predict(user: string, item: string): number {
        this.requireTrained();
        const pairFile = path.join(this.workdir, "pair.tsv");
        // the rating column is required by the parser but ignored here
        fs.writeFileSync(pairFile, `${user}\t${item}\t1\n`);
        const outFile = path.join(this.workdir, "pair-pred.json");
        runCfkit(["test", "--model", this.modelPath, "--test", pairFile, "--out", outFile, "--format", "json"]);
        const records = JSON.parse(fs.readFileSync(outFile, "utf8")) as Prediction[];
        return records[0].prediction;
    }

    /** Top-N item tokens for a user, best first. */
    recommend(user: string, topn = 10, includeRated = false): string[] {
        this.requireTrained();
        const stdout = runCfkit([
            "recommend",
            "--model", this.modelPath,
            "--user", user,
            "--top-n", String(topn),
            ...(includeRated ? ["--include-rated"] : []),
        ]);
        return (JSON.parse(stdout) as { user: string; items: string[] }).items;
    }

    /** Evaluate against a test file; optionally write the predictions. */
    test(testPath: string, outputPath?: string, outputFormat: "txt" | "json" = "json"): TestResult {
        this.requireTrained();
        const out = outputPath ? path.resolve(outputPath) : path.join(this.workdir, "preds.json");
        const fmt = outputPath ? outputFormat : "json";
        const stdout = runCfkit([
            "test",
            "--model", this.modelPath,
            "--test", path.resolve(testPath),
            "--out", out,
            "--format", fmt,
        ]);
        const match = METRICS.exec(stdout);
        if (!match) {
            throw new CliError(0, `unexpected test output: ${stdout}`);
        }
        return {
            predictions: readPredictions(out, fmt),
            mae: Number(match[1]),
            rmse: Number(match[2]),
        };
    }

    /** Remove the temporary model directory. */
    dispose(): void {
        fs.rmSync(this.workdir, { recursive: true, force: true });
        this.trained = false;
    }

    protected trainArgs(_options: object): string[] {
        return [];
    }

    private requireTrained(): void {
        if (!this.trained) {
            throw new NotTrainedError(this.algo);
        }
    }

    private specArgs(): string[] {
        const args: string[] = [];
        const o = this.options;
        if (o.dlmchar !== undefined) args.push("--delimiter", o.dlmchar);
        if (o.header) args.push("--header");
        if (o.usercol !== undefined) args.push("--user-col", String(o.usercol));
        if (o.itemcol !== undefined) args.push("--item-col", String(o.itemcol));
        if (o.ratingcol !== undefined) args.push("--rating-col", String(o.ratingcol));
        return args;
    }
}

function readPredictions(file: string, fmt: "txt" | "json"): Prediction[] {
    const text = fs.readFileSync(file, "utf8");
    if (fmt === "json") {
        return JSON.parse(text) as Prediction[];
    }
    return text
        .split("\n")
        .filter((line) => line.length > 0)
        .map((line) => {
            const [user, item, value] = line.split("\t");
            return { user, item, prediction: Number(value) };
        });
}

export class UserAvg extends Recommender {
    readonly algo = "useravg";
}

export class ItemAvg extends Recommender {
    readonly algo = "itemavg";
}

export class MostPopular extends Recommender {
    readonly algo = "mostpopular";
}

export class SlopeOne extends Recommender {
    readonly algo = "slopeone";
}

abstract class KnnRecommender extends Recommender {
    protected override trainArgs(options: KnnTrainOptions): string[] {
        return options.k !== undefined ? ["--k", String(options.k)] : [];
    }
}

export class UserKnn extends KnnRecommender {
    readonly algo = "userknn";
}

export class ItemKnn extends KnnRecommender {
    readonly algo = "itemknn";
}

export class SVD extends Recommender {
    readonly algo = "funksvd";

    protected override trainArgs(options: SvdTrainOptions): string[] {
        const args: string[] = [];
        if (options.factors !== undefined) args.push("--factors", String(options.factors));
        if (options.maxiter !== undefined) args.push("--max-iter", String(options.maxiter));
        if (options.lr !== undefined) args.push("--lr", String(options.lr));
        if (options.lamb !== undefined) args.push("--reg", String(options.lamb));
        if (options.seed !== undefined) args.push("--seed", String(options.seed));
        return args;
    }
}
