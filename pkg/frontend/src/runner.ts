import { execFileSync } from "node:child_process";

/** The core CLI exited with a non-zero status. */
export class CliError extends Error {
    readonly exitCode: number;
    readonly stderr: string;

    constructor(exitCode: number, stderr: string) {
        const detail = stderr.trim().split("\n").pop() ?? "";
        super(`cfkit exited with code ${exitCode}: ${detail}`);
        this.name = "CliError";
        this.exitCode = exitCode;
        this.stderr = stderr;
    }
}

/** predict/recommend/test was called on a recommender that is not trained. */
export class NotTrainedError extends Error {
    constructor(algo: string) {
        super(`${algo} recommender is not trained yet: call train() first`);
        this.name = "NotTrainedError";
    }
}

/** Interpreter used to run the core; override with CFKIT_PYTHON. */
export function pythonExecutable(): string {
    return process.env.CFKIT_PYTHON ?? "python3";
}

/** Run one cfkit command and return its stdout. */
export function runCfkit(args: string[]): string {
    try {
        return execFileSync(pythonExecutable(), ["-m", "cfkit", ...args], {
            encoding: "utf8",
            stdio: ["ignore", "pipe", "pipe"],
            maxBuffer: 64 * 1024 * 1024,
        });
    } catch (err) {
        const failure = err as { status?: number | null; stderr?: string; message?: string };
        if (typeof failure.status === "number") {
            throw new CliError(failure.status, failure.stderr ?? "");
        }
        throw err;
    }
}
