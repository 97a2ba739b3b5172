export {
    Recommender,
    UserAvg,
    ItemAvg,
    MostPopular,
    SlopeOne,
    UserKnn,
    ItemKnn,
    SVD,
} from "./recommenders.js";
export type {
    FileSpecOptions,
    KnnTrainOptions,
    Prediction,
    SvdTrainOptions,
    TestResult,
} from "./recommenders.js";
export { CliError, NotTrainedError, runCfkit, pythonExecutable } from "./runner.js";
