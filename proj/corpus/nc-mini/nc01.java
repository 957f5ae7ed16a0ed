public class Answer {
    public static int sumEvens(int n) {
        int total = 0;
        int seen = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                total = total + i;
            }
            seen = seen + 1;
        }
        return total + seen;
    }
}
