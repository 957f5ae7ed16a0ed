public class Answer {
    public static int max(int a, int b) {
        int result = 0;
        if (a > b) {
            result = a;
        } else {
            result = b;
        }
        return result;
    }
}
