// Mutation serializer: at most one in-flight request; later clicks queue
// in order behind it.

export class MutationQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private pending = 0;

  get size(): number {
    return this.pending;
  }

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    this.pending += 1;
    const run = this.tail.then(task);
    // keep the chain alive past failures; callers still see the rejection
    this.tail = run.catch(() => undefined).finally(() => {
      this.pending -= 1;
    });
    return run;
  }
}
