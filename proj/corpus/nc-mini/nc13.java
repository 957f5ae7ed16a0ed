public class Answer {
    public static int tally(int n) {
        int evens = 0;
        int threes = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                evens = evens + 1;
            }
            if (i % 3 == 0) {
                threes = threes + 1;
            }
        }
        return evens + threes;
    }
}
